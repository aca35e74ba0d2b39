#include "ufl/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ufl/common.hpp"
#include "ufl/quadrature.hpp"

namespace ufl {

double CharacteristicFunction::value_at(double p) const {
  if (is_threshold) return p <= q ? 0.0 : 1.0 / (1.0 - q);
  auto it = std::lower_bound(breaks.begin(), breaks.end(), p);
  if (it == breaks.end()) return values.back();
  return values[(std::size_t)(it - breaks.begin())];
}

double CharacteristicFunction::integral() const {
  if (is_threshold) return 1.0;
  double total = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    total += values[i] * (breaks[i] - prev);
    prev = breaks[i];
  }
  return total;
}

CharacteristicFunction CharacteristicFunction::normalized() const {
  if (is_threshold) return *this;
  double total = integral();
  if (!(total > 0.0)) throw input_error("characteristic function has nonpositive integral");
  CharacteristicFunction out = *this;
  for (double& v : out.values) v /= total;
  return out;
}

void CharacteristicFunction::validate() const {
  if (is_threshold) {
    if (!(q >= 0.0 && q < 1.0)) throw input_error("threshold q must lie in [0,1)");
    return;
  }
  if (breaks.empty() || breaks.size() != values.size())
    throw input_error("step function needs matching nonempty breakpoints and values");
  double prev = 0.0;
  for (double b : breaks) {
    if (!(b > prev)) throw input_error("step breakpoints must be strictly ascending in (0,1]");
    prev = b;
  }
  if (std::abs(breaks.back() - 1.0) > 1e-12)
    throw input_error("step function must end at p = 1");
  double pv = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw input_error("step values must be nonnegative");
    if (v < pv - 1e-9 * std::max(1.0, pv))
      throw input_error("step values must be nondecreasing");
    pv = v;
  }
  if (std::abs(integral() - 1.0) > 1e-9)
    throw input_error("characteristic function is not normalized");
}

CharacteristicFunction CharacteristicFunction::threshold(double q) {
  CharacteristicFunction h;
  h.is_threshold = true;
  h.q = q;
  h.validate();
  return h;
}

CharacteristicFunction CharacteristicFunction::steps(std::vector<double> breaks,
                                                     std::vector<double> values) {
  CharacteristicFunction h;
  h.breaks = std::move(breaks);
  h.values = std::move(values);
  if (!h.breaks.empty() && std::abs(h.breaks.back() - 1.0) <= 1e-9) h.breaks.back() = 1.0;
  return h;
}

CharacteristicFunction CharacteristicFunction::as_steps() const {
  if (!is_threshold) return *this;
  CharacteristicFunction h;
  if (q == 0.0) {
    h.breaks = {1.0};
    h.values = {1.0};
  } else {
    h.breaks = {q, 1.0};
    h.values = {0.0, 1.0 / (1.0 - q)};
  }
  return h;
}

double GammaDistribution::total_mass() const {
  double m = kappa;
  for (const auto& a : atoms) m += a.second;
  for (const auto& p : uniform_pieces) m += p.mass;
  return m;
}

void GammaDistribution::validate() const {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw input_error("kappa must lie in [0,1)");
  for (const auto& a : atoms) {
    if (!(a.first >= 1.0)) throw input_error("atom gamma below 1");
    if (!(a.second >= 0.0)) throw input_error("negative atom mass");
  }
  for (const auto& p : uniform_pieces) {
    if (!(p.lo >= 1.0 && p.hi > p.lo)) throw input_error("bad uniform piece bounds");
    if (!(p.mass >= 0.0)) throw input_error("negative uniform piece mass");
  }
  if (std::abs(total_mass() - 1.0) > 1e-12)
    throw input_error("distribution masses must sum to 1");
}

double GammaDistribution::sample_gamma(double u) const {
  double part = total_mass() - kappa;
  if (!(part > 0.0)) throw input_error("distribution has no gamma mass");
  double x = u * part;
  for (const auto& a : atoms) {
    if (x < a.second) return a.first;
    x -= a.second;
  }
  for (const auto& p : uniform_pieces) {
    if (x < p.mass) return p.lo + (p.hi - p.lo) * (x / p.mass);
    x -= p.mass;
  }
  if (!uniform_pieces.empty()) return uniform_pieces.back().hi;
  return atoms.back().first;
}

GammaDistribution mu1() {
  GammaDistribution d;
  d.kappa = 0.195583;
  d.atoms.push_back({1.479311, 0.503357});
  d.uniform_pieces.push_back({1.479311, 2.016569, 1.0 - 0.195583 - 0.503357});
  d.validate();
  return d;
}

GammaDistribution mu2(double eps7, double kappa2) {
  GammaDistribution base = mu1();
  GammaDistribution d;
  d.kappa = kappa2;
  double scale = (1.0 - kappa2) / (1.0 - base.kappa);
  for (const auto& a : base.atoms) d.atoms.push_back({a.first, (1.0 - eps7) * a.second * scale});
  for (const auto& p : base.uniform_pieces)
    d.uniform_pieces.push_back({p.lo, p.hi, (1.0 - eps7) * p.mass * scale});
  d.atoms.push_back({1.0, eps7 * (1.0 - kappa2)});
  d.validate();
  return d;
}

CharacteristicFunction h_empirical(const AugmentedSolution& aug,
                                   const ClientDecomposition& dec) {
  const std::size_t nc = aug.n_clients;
  double total = 0.0;
  for (double c : dec.Cstar) total += c;
  if (!(total > 0.0)) throw input_error("h_empirical: zero total connection value");

  std::vector<CharacteristicFunction> parts(nc);
  std::vector<double> all_breaks;
  for (std::size_t j = 0; j < nc; ++j) {
    std::vector<std::size_t> walk = aug.close_set[j];
    walk.insert(walk.end(), aug.distant_set[j].begin(), aug.distant_set[j].end());
    double mass = 0.0;
    for (std::size_t c : walk) mass += aug.copies[c].ystar_share;
    if (std::abs(mass - 1.0) > 1e-9)
      throw solver_error("h_empirical: client mass " + format_double(mass));
    std::vector<double> br, vals;
    double acc = 0.0;
    for (std::size_t c : walk) {
      acc += aug.copies[c].ystar_share / mass;
      double d = aug.copy_dist(c, j);
      if (!br.empty() && vals.back() == d) {
        br.back() = acc;  // merge equal-distance copies
      } else {
        br.push_back(acc);
        vals.push_back(d);
      }
    }
    br.back() = 1.0;
    parts[j] = CharacteristicFunction::steps(std::move(br), std::move(vals));
    for (double b : parts[j].breaks) all_breaks.push_back(b);
  }
  std::sort(all_breaks.begin(), all_breaks.end());
  all_breaks.erase(std::unique(all_breaks.begin(), all_breaks.end()), all_breaks.end());

  std::vector<double> vals(all_breaks.size(), 0.0);
  for (std::size_t k = 0; k < all_breaks.size(); ++k)
    for (std::size_t j = 0; j < nc; ++j) vals[k] += parts[j].value_at(all_breaks[k]);
  CharacteristicFunction h =
      CharacteristicFunction::steps(std::move(all_breaks), std::move(vals)).normalized();
  h.validate();
  return h;
}

double alpha_of(double gamma, const CharacteristicFunction& h) {
  if (gamma < 1.0) throw input_error("alpha_of: gamma below 1");
  const double eg = std::exp(-gamma);
  double first;
  if (h.is_threshold) {
    first = (std::exp(-h.q * gamma) - eg) / (1.0 - h.q);
  } else {
    first = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < h.breaks.size(); ++i) {
      first += h.values[i] * (std::exp(-gamma * prev) - std::exp(-gamma * h.breaks[i]));
      prev = h.breaks[i];
    }
  }
  return first + eg * (gamma + (3.0 - gamma) * h.value_at(1.0 / gamma));
}

double alpha_prime_of(double gamma, const CharacteristicFunction& h, double eps7) {
  double a = alpha_of(gamma, h);
  if (gamma > 1.6 && gamma < 2.0) a -= eps7 * gamma * std::exp(-gamma);
  return a;
}

namespace {

// Gammas at which alpha(., h) has a kink: the 1/p image of h's jump points,
// plus the variant's 1.6/2.0 window edges.
std::vector<double> alpha_kinks(const CharacteristicFunction& h, GameVariant variant) {
  std::vector<double> ks;
  if (h.is_threshold) {
    if (h.q > 0.0) ks.push_back(1.0 / h.q);
  } else {
    for (double b : h.breaks)
      if (b > 0.0 && b < 1.0) ks.push_back(1.0 / b);
  }
  if (variant == GameVariant::nu_prime) {
    ks.push_back(1.6);
    ks.push_back(2.0);
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

}  // namespace

double game_value(const GammaDistribution& dist, const CharacteristicFunction& h,
                  GameVariant variant, double eps7) {
  auto A = [&](double g) {
    return variant == GameVariant::nu ? alpha_of(g, h) : alpha_prime_of(g, h, eps7);
  };
  double b1 = 1.11 * dist.kappa;
  double b2 = 1.7764 * dist.kappa;
  for (const auto& a : dist.atoms) {
    b1 += a.first * a.second;
    b2 += A(a.first) * a.second;
  }
  std::vector<double> kinks = alpha_kinks(h, variant);
  for (const auto& p : dist.uniform_pieces) {
    b1 += p.mass * 0.5 * (p.lo + p.hi);
    double density = p.mass / (p.hi - p.lo);
    std::vector<double> cuts{p.lo};
    for (double k : kinks)
      if (k > p.lo && k < p.hi) cuts.push_back(k);
    cuts.push_back(p.hi);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
      b2 += density * integrate(A, cuts[s], cuts[s + 1], 1e-9);
  }
  return std::max(b1, b2);
}

std::pair<double, double> worst_case_ratio(const GammaDistribution& dist, GameVariant variant,
                                           double eps7, double q_grid_step) {
  if (!(q_grid_step > 0.0 && q_grid_step <= 1e-3 + 1e-15))
    throw input_error("q grid step must lie in (0, 1e-3]");
  auto f = [&](double q) {
    return game_value(dist, CharacteristicFunction::threshold(q), variant, eps7);
  };
  double best_q = 0.0, best_v = f(0.0);
  for (std::size_t k = 1;; ++k) {
    double q = (double)k * q_grid_step;
    if (q >= 1.0 - 1e-12) break;
    double v = f(q);
    if (v > best_v) {
      best_v = v;
      best_q = q;
    }
  }
  double lo = std::max(0.0, best_q - q_grid_step);
  double hi = std::min(best_q + q_grid_step, 1.0 - 1e-9);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-6) {
    if (f1 > best_v) {
      best_v = f1;
      best_q = x1;
    }
    if (f2 > best_v) {
      best_v = f2;
      best_q = x2;
    }
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return {best_v, best_q};
}

std::string game_profile_tsv(const GammaDistribution& dist, GameVariant variant, double eps7,
                             double q_grid_step) {
  if (!(q_grid_step > 0.0 && q_grid_step <= 1e-3 + 1e-15))
    throw input_error("q grid step must lie in (0, 1e-3]");
  std::ostringstream os;
  os << "q\tvalue\n";
  for (std::size_t k = 0;; ++k) {
    double q = (double)k * q_grid_step;
    if (q >= 1.0 - 1e-12) break;
    double v = game_value(dist, CharacteristicFunction::threshold(q), variant, eps7);
    os << format_double(q) << '\t' << format_double(v) << '\n';
  }
  return os.str();
}

}  // namespace ufl
