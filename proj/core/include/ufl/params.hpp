#pragma once

#include <string>
#include <vector>

namespace ufl {

// Numeric constants steering augmentation, clustering and verification.
// `defaults()` is the published calibration; `inflated()` scales the
// epsilon/delta ladder up to ~1e-3 so that epsilon-sensitive behavior is
// visible above double-precision comparison noise in tests.
struct ParamSet {
  double K1 = 1.3025, K2 = 1.3024, K3 = 1.3023, K4 = 1.3022, K5 = 1.3021, K6 = 1.3020;
  double gamma = 1.6774;
  double theta = 0.0;  // (K6 + 1 - gamma) / (2*K6 + 2 - gamma)
  double alpha = 5e-4;
  long long M_cap = 5'000'000;
  double r_cone = 1e-8;
  long long L_interval = 200'000'000;
  double phi_r = 0.0;  // smallest cone half-angle compatible with r_cone
  double eps1 = 1e-12, eps2 = 5e-18, eps3 = 3e-32, eps4 = 2e-36;
  double eps5 = 2e-41, eps6 = 3e-42, eps7 = 2e-42, eps8 = 2e-45;
  double delta = 3e-23;
  double delta_prime = 7e-32;
  double lp_tol = 1e-9;
  double cmp_tol = 1e-12;
  double gamma0 = 0.0;  // root of the distribution-tail balance equation
  // Range of theta values over which the theta-dependent consistency
  // conditions are certified (condition worst case is taken over this
  // interval's endpoints, not over the per-gamma formula value).
  double theta_range_lo = 0.2336, theta_range_hi = 0.3613;

  static double theta_for(double gamma, double K6 = 1.3020);

  static ParamSet defaults(double gamma = 1.6774);
  static ParamSet inflated(double gamma = 1.6774);

  // Throws input_error on violated structural invariants (ordering of the
  // K ladder, epsilon ladder, gamma/theta consistency, positivity).
  void check_invariants() const;
};

// Smallest angle phi such that 1 + x^2 + 2x cos(phi) <= (1 + (1-r)x)^2 for
// all x in [0,2]. The bound is binding at x = 2, giving the closed form
// phi = acos(1 - 3r + r^2).
double compute_phi_r(double r_cone);

// Root of 1/e + e^{-g} - (g-1)(1 - 1/e + (1-eps5) e^{-g}) = 0 in (1.6, 1.7),
// found by bisection to 1e-12.
double compute_gamma0(double eps5);

struct ConditionResult {
  int index = 0;  // 1..13
  std::string name;
  bool pass = false;
  double margin = 0.0;       // worst-case slack; >= 0 means the condition holds
  double worst_gamma = 0.0;  // NaN when the condition does not depend on gamma
  double worst_theta = 0.0;  // NaN when the condition does not depend on theta
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  bool all_pass() const;
};

// Evaluates the 13 parameter-consistency conditions. Gamma-dependent
// conditions are checked at every grid value; theta-dependent conditions at
// both endpoints of [theta_range_lo, theta_range_hi]. Failures are reported,
// never thrown.
ConditionReport validate_parameters(const ParamSet& params,
                                    const std::vector<double>& gamma_grid);

// Default verification grid: 1.601, 1.602, ..., 1.999.
std::vector<double> default_gamma_grid();

}  // namespace ufl
