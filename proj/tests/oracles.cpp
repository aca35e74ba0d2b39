#include "oracles.hpp"

#include <limits>

namespace testoracle {

double flat_subset_opt(const ufl::Instance& inst, std::uint32_t* best_mask) {
  const std::size_t nf = inst.num_facilities();
  const std::size_t nc = inst.num_clients();
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t bm = 0;
  for (std::uint32_t mask = 1; mask < (1u << nf); ++mask) {
    double cost = 0.0;
    for (std::size_t i = 0; i < nf; ++i)
      if (mask & (1u << i)) cost += inst.facilities[i].open_cost;
    for (std::size_t j = 0; j < nc; ++j) {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nf; ++i)
        if (mask & (1u << i)) d = std::min(d, inst.dist(i, j));
      cost += d;
    }
    if (cost < best) {
      best = cost;
      bm = mask;
    }
  }
  if (best_mask) *best_mask = bm;
  return best;
}

void remote_arm_lhs_reference(double gamma, double k, double l, double r,
                              const ufl::ParamSet& params, double& lhs1, double& lhs2) {
  const double x = params.K6;
  const double delta = params.delta;
  const double eps1 = params.eps1;
  const double W = gamma - 1.0 + l - k + delta;
  const double sq = (x + 1.0) * (x + 1.0) / 0.995;

  double t1 = (3.0 - gamma - l) * (gamma - 1.0) * (2.0 * x + (2.0 - gamma) * r) +
              W * ((gamma - 1.0) * (x + r) -
                   (2.0 - gamma + eps1) * (x - (gamma - 1.0) * r));
  double t2 = l * (gamma - 1.0) * (2.0 * x + (2.0 - gamma) * r);
  lhs1 = t1 * t1 + t2 * t2 - W * W * sq;

  double u1 = ((6.0 - 2.0 * gamma - 2.0 * l) / (1.0 + delta) - (2.0 - gamma + eps1)) *
                  (x - (gamma - 1.0) * r) +
              (gamma - 1.0) * (x + r);
  double u2 = (2.0 * l / (1.0 + delta)) * (x - (gamma - 1.0) * r);
  lhs2 = u1 * u1 + u2 * u2 - sq;
}

}  // namespace testoracle
