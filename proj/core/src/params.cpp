#include "ufl/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ufl/common.hpp"

namespace ufl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double ParamSet::theta_for(double gamma, double K6) {
  return (K6 + 1.0 - gamma) / (2.0 * K6 + 2.0 - gamma);
}

double compute_phi_r(double r_cone) {
  if (!(r_cone > 0.0 && r_cone < 1.0))
    throw input_error("cone radius fraction must lie in (0,1)");
  // The constraint 1 + x^2 + 2x cos(phi) <= (1 + (1-r)x)^2 rearranges to
  // cos(phi) <= (1-r) - x*r*(2-r)/2, decreasing in x, so x = 2 binds.
  double c = 1.0 - 3.0 * r_cone + r_cone * r_cone;
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

double compute_gamma0(double eps5) {
  auto g = [eps5](double x) {
    double e = std::exp(-x);
    return std::exp(-1.0) + e - (x - 1.0) * (1.0 - std::exp(-1.0) + (1.0 - eps5) * e);
  };
  double lo = 1.6, hi = 1.7;
  if (!(g(lo) > 0.0 && g(hi) < 0.0)) {
    lo = 1.01;
    hi = 1.99;
    while (hi - lo > 1e-2 && !(g(lo) > 0.0 && g(lo + 1e-2) < 0.0)) lo += 1e-2;
    hi = lo + 1e-2;
    if (!(g(lo) > 0.0 && g(hi) < 0.0))
      throw solver_error("failed to bracket the distribution-tail balance root");
  }
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ParamSet ParamSet::defaults(double gamma) {
  if (!(gamma > 1.0 && gamma < 2.0))
    throw input_error("gamma must lie in (1,2)");
  ParamSet p;
  p.gamma = gamma;
  p.theta = theta_for(gamma, p.K6);
  p.phi_r = compute_phi_r(p.r_cone);
  p.gamma0 = compute_gamma0(p.eps5);
  p.check_invariants();
  return p;
}

ParamSet ParamSet::inflated(double gamma) {
  if (!(gamma > 1.0 && gamma < 2.0))
    throw input_error("gamma must lie in (1,2)");
  ParamSet p;
  p.gamma = gamma;
  p.theta = theta_for(gamma, p.K6);
  p.eps1 = 3e-3;
  p.eps2 = 2e-3;
  p.eps3 = 1e-3;
  p.delta = 2.1e-3;
  p.delta_prime = 1e-6;
  p.L_interval = 500;
  p.eps4 = (1.0 - p.K4 / p.K3) *
           std::min(p.eps3, 2.0 * p.delta_prime / (1.0 + p.delta_prime));
  p.eps5 = p.eps4 / 1e5;
  p.gamma0 = compute_gamma0(p.eps5);
  p.eps6 = p.eps5 / std::exp(p.gamma0);
  p.eps7 = 0.116 * p.eps5;
  p.eps8 = p.eps7 / 1000.0;
  p.phi_r = compute_phi_r(p.r_cone);
  p.check_invariants();
  return p;
}

void ParamSet::check_invariants() const {
  if (!(gamma > 1.0 && gamma < 2.0))
    throw input_error("gamma must lie in (1,2)");
  if (!(K1 > K2 && K2 > K3 && K3 > K4 && K4 > K5 && K5 > K6 && K6 > 0.0))
    throw input_error("K ladder must be strictly decreasing and positive");
  double want_theta = theta_for(gamma, K6);
  if (std::fabs(theta - want_theta) > 1e-14)
    throw input_error("theta inconsistent with gamma and K6");
  if (!(eps1 > eps2 && eps2 > eps3 && eps3 > eps4 && eps4 > eps5 && eps5 > eps6 && eps6 > 0.0))
    throw input_error("epsilon ladder must be strictly decreasing and positive");
  if (!(eps7 > 0.0 && eps7 <= eps5))
    throw input_error("eps7 must lie in (0, eps5]");
  if (!(eps8 > 0.0) || std::fabs(eps8 - eps7 / 1000.0) > 1e-9 * eps8)
    throw input_error("eps8 must equal eps7/1000");
  if (!(delta > 0.0 && delta_prime > 0.0))
    throw input_error("delta and delta_prime must be positive");
  if (!(alpha > 0.0)) throw input_error("alpha must be positive");
  if (!(M_cap >= 1)) throw input_error("M_cap must be a positive integer");
  if (!(r_cone > 0.0 && r_cone < 1.0)) throw input_error("r_cone must lie in (0,1)");
  if (!(L_interval >= 1)) throw input_error("L_interval must be a positive integer");
  if (!(phi_r > 0.0)) throw input_error("phi_r must be positive");
  if (!(gamma0 > 1.0 && gamma0 < 2.0)) throw input_error("gamma0 must lie in (1,2)");
  if (!(lp_tol > 0.0 && cmp_tol > 0.0))
    throw input_error("tolerances must be positive");
  if (!(theta_range_lo > 0.0 && theta_range_lo < theta_range_hi && theta_range_hi < 0.5))
    throw input_error("theta certification range must satisfy 0 < lo < hi < 1/2");
}

bool ConditionReport::all_pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> g;
  g.reserve(399);
  for (int i = 1; i <= 399; ++i) g.push_back(1.6 + i / 1000.0);
  return g;
}

namespace {

// Pass criterion: the worst margin may only be negative by relative noise.
bool margin_passes(double margin, double scale) {
  return margin >= -1e-9 * std::max(1e-300, scale);
}

struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  double gamma = kNaN;
  double theta = kNaN;
  double scale = 0.0;

  void offer(double m, double s, double g = kNaN, double t = kNaN) {
    if (m < margin) {
      margin = m;
      gamma = g;
      theta = t;
      scale = s;
    }
  }
};

ConditionResult finish(int index, std::string name, const Worst& w) {
  ConditionResult r;
  r.index = index;
  r.name = std::move(name);
  r.margin = w.margin;
  r.pass = margin_passes(w.margin, w.scale);
  r.worst_gamma = w.gamma;
  r.worst_theta = w.theta;
  return r;
}

}  // namespace

ConditionReport validate_parameters(const ParamSet& p,
                                    const std::vector<double>& gamma_grid) {
  ConditionReport report;
  const double theta_pts[2] = {p.theta_range_lo, p.theta_range_hi};

  // 1: the remote-arm construction needs a sine gap below the fixed
  //    separation constant 0.005 * 0.2319.
  {
    Worst w;
    double lhs = 2.0 * 0.998 * std::sin(p.alpha);
    double rhs = (1.0 - 0.995) * 0.2319;
    w.offer(rhs - lhs, std::max(lhs, rhs));
    report.conditions.push_back(finish(1, "arm_separation", w));
  }

  // 2: comparison noise must be far below the close-mass threshold.
  {
    Worst w;
    for (double th : theta_pts) {
      double lhs = (p.eps1 + p.delta) / th;
      w.offer(0.01 - lhs, std::max(0.01, lhs), kNaN, th);
    }
    report.conditions.push_back(finish(2, "noise_vs_theta", w));
  }

  // 3: relative mass error transported through the cone argument stays
  //    below the theta-dependent probability slack.
  {
    Worst w;
    for (double th : theta_pts) {
      double lhs = (1.0 / (0.98 * th * p.r_cone)) * ((p.delta + p.eps1 / 2.0) / (1.0 + p.delta));
      double rhs = 0.00099 * th / (1.0 - th);
      w.offer(rhs - lhs, std::max(lhs, rhs), kNaN, th);
    }
    report.conditions.push_back(finish(3, "cone_mass_ratio", w));
  }

  // 4: cone angle consistency plus the scan-length cap M_cap.
  {
    Worst w;
    double rr = p.r_cone;
    {
      double lhs = 1.0 + 4.0 + 4.0 * std::cos(p.phi_r);
      double rhs = (3.0 - 2.0 * rr) * (3.0 - 2.0 * rr);
      w.offer(rhs - lhs, std::max(lhs, rhs));
    }
    w.offer(p.alpha - p.phi_r, std::max(p.alpha, p.phi_r));
    w.offer(0.01 - 2.0 * p.phi_r, 0.01);
    for (double th : theta_pts) {
      double lhs = 2.0 * (1.0 + p.delta) * std::sin(p.alpha);
      w.offer(0.98 * th - lhs, std::max(0.98 * th, lhs), kNaN, th);
      double need = (1.0 + 1.0 / std::sin(p.alpha - p.phi_r)) *
                    (std::log((1.0 - th) / (0.99 * th)) / std::log(1.001));
      w.offer(static_cast<double>(p.M_cap) - need,
              std::max(static_cast<double>(p.M_cap), need), kNaN, th);
    }
    report.conditions.push_back(finish(4, "cone_angle_and_scan_cap", w));
  }

  // 5: constants of the 36/25 distance-expansion step.
  {
    Worst w;
    {
      double lhs = (36.0 / 25.0) * (1.0 + p.delta);
      double rhs = (3.0 - p.eps1) / (2.0 * (1.0 + p.delta));
      w.offer(rhs - lhs, std::max(lhs, rhs));
    }
    {
      double lhs = 72.0 * p.delta + 25.0 * p.eps1;
      w.offer(1.0 - lhs, std::max(1.0, lhs));
    }
    report.conditions.push_back(finish(5, "distance_expansion", w));
  }

  // 6: per-gamma transfer bound for the eps2 averaging step.
  {
    Worst w;
    double big = std::max(125.0 * static_cast<double>(p.M_cap) * (1.0 + p.delta) / 2.0,
                          1.0 / (p.eps1 - p.eps2));
    for (double g : gamma_grid) {
      double lhs = (p.delta + p.eps2) * ((2.0 * p.K5 + 2.0 - g) / (p.K5 - p.K6)) *
                   (p.K5 / (p.K5 - g + 1.0)) * big;
      w.offer(1.0 - lhs, std::max(1.0, lhs), g);
    }
    report.conditions.push_back(finish(6, "eps2_transfer", w));
  }

  // 7: per-gamma transfer bound for the eps3 averaging step.
  {
    Worst w;
    for (double g : gamma_grid) {
      double lhs = (p.delta + p.eps3) * (2.0 - g + 2.0 * p.K4) / p.K4;
      double rhs = (p.eps2 - p.eps3) * (p.K5 - g + 1.0) * (p.K4 - p.K5) / (p.K4 * p.K5);
      w.offer(rhs - lhs, std::max(lhs, rhs), g);
    }
    report.conditions.push_back(finish(7, "eps3_transfer", w));
  }

  // 8: interval value drift (1+delta')^{2L} <= 1+delta, and the eps4 level.
  //    The power is compared in log space; both sides round to 1.0 in
  //    doubles at the published magnitudes.
  {
    Worst w;
    {
      double lhs = 2.0 * static_cast<double>(p.L_interval) * std::log1p(p.delta_prime);
      double rhs = std::log1p(p.delta);
      w.offer(rhs - lhs, std::max(lhs, rhs));
    }
    {
      double rhs = (1.0 - p.K4 / p.K3) *
                   std::min(p.eps3, 2.0 * p.delta_prime / (1.0 + p.delta_prime));
      w.offer(rhs - p.eps4, std::max(p.eps4, rhs));
    }
    report.conditions.push_back(finish(8, "interval_drift", w));
  }

  // 9: reward floor of the interval cut.
  {
    Worst w;
    double a = p.K2 / ((p.K2 - p.K3) * static_cast<double>(p.L_interval));
    double lhs = (1.0 - a - (p.K2 - p.K3) / p.K2) * (1.0 - (p.K2 / p.K1) / (1.0 - a));
    w.offer(lhs - 1e-5, std::max(lhs, 1e-5));
    report.conditions.push_back(finish(9, "reward_floor", w));
  }

  // 10: eps5 sits at least 1e5 below eps4.
  {
    Worst w;
    double rhs = p.eps4 / 1e5;
    w.offer(rhs - p.eps5, std::max(p.eps5, rhs));
    report.conditions.push_back(finish(10, "eps5_level", w));
  }

  // 11: eps6 survives the exp(gamma0) attenuation.
  {
    Worst w;
    double rhs = p.eps5 / std::exp(p.gamma0);
    w.offer(rhs - p.eps6, std::max(p.eps6, rhs));
    report.conditions.push_back(finish(11, "eps6_level", w));
  }

  // 12: per-gamma eps7 level.
  {
    Worst w;
    for (double g : gamma_grid) {
      double rhs = ((p.K1 - g + 1.0) / (2.0 * p.K1 - g + 2.0)) * p.eps5;
      w.offer(rhs - p.eps7, std::max(p.eps7, rhs), g);
    }
    report.conditions.push_back(finish(12, "eps7_level", w));
  }

  // 13: eps8 sits 1000x below eps7.
  {
    Worst w;
    double rhs = p.eps7 / 1000.0;
    w.offer(rhs - p.eps8, std::max(p.eps8, rhs));
    report.conditions.push_back(finish(13, "eps8_level", w));
  }

  return report;
}

}  // namespace ufl
