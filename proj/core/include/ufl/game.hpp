#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ufl/augment.hpp"
#include "ufl/lp.hpp"

namespace ufl {

// Nonnegative nondecreasing function on (0,1] with unit integral after
// normalization. Either a threshold function (0 on (0,q], 1/(1-q) above) or
// a piecewise-constant step list: value values[i] on (breaks[i-1], breaks[i]]
// with breaks ascending and breaks.back() == 1.
struct CharacteristicFunction {
  bool is_threshold = false;
  double q = 0.0;
  std::vector<double> breaks;
  std::vector<double> values;

  double value_at(double p) const;
  double integral() const;
  CharacteristicFunction normalized() const;
  void validate() const;  // nonnegative, nondecreasing, integral == 1 within 1e-9

  static CharacteristicFunction threshold(double q);
  static CharacteristicFunction steps(std::vector<double> breaks, std::vector<double> values);
  // The step list equal to this function (identity for step form).
  CharacteristicFunction as_steps() const;
};

// Mixture over gamma: kappa directly selects the dual-ascent solver, atoms
// and uniform pieces carry the rest of the mass.
struct GammaDistribution {
  double kappa = 0.0;
  std::vector<std::pair<double, double>> atoms;  // (gamma, mass)
  struct UniformPiece {
    double lo = 0.0, hi = 0.0, mass = 0.0;
  };
  std::vector<UniformPiece> uniform_pieces;

  double total_mass() const;
  void validate() const;  // kappa + masses == 1 within 1e-12, gammas >= 1
  // Draws from the gamma part (conditioned on not selecting kappa).
  double sample_gamma(double u) const;
};

// Published production mixture: kappa = 0.195583, an atom of mass 0.503357
// at gamma 1.479311 and the remaining mass uniform on (1.479311, 2.016569).
GammaDistribution mu1();

// Derived mixture: scales mu1's gamma part by (1-kappa2)/(1-kappa) and
// (1-eps7), moves eps7*(1-kappa2) to an atom at gamma = 1, and replaces the
// solver mass by kappa2.
GammaDistribution mu2(double eps7, double kappa2 = 0.195583);

// Aggregated empirical step function: per client the distance profile over
// its used copies (cumulative ystar mass, sorted by distance), summed over
// clients and normalized by the total connection value.
CharacteristicFunction h_empirical(const AugmentedSolution& aug, const ClientDecomposition& dec);

// alpha(gamma, h) = int_0^1 h(p) gamma e^{-gamma p} dp
//                 + e^{-gamma} (gamma + (3-gamma) h(1/gamma)),
// with the closed form (e^{-q gamma} - e^{-gamma})/(1-q) for threshold h.
// gamma < 1 -> input_error (the mixture support starts at 1).
double alpha_of(double gamma, const CharacteristicFunction& h);

// alpha with the (1 - eps7) factor applied to the gamma e^{-gamma} term,
// only for gamma strictly inside (1.6, 2).
double alpha_prime_of(double gamma, const CharacteristicFunction& h, double eps7);

enum class GameVariant { nu, nu_prime };

// max of the two payoffs: expected gamma + 1.11 kappa, and expected
// alpha(gamma, h) + 1.7764 kappa. Atom terms are exact; uniform pieces are
// integrated adaptively to 1e-7, split at the alpha kinks.
double game_value(const GammaDistribution& dist, const CharacteristicFunction& h,
                  GameVariant variant, double eps7);

// Adversary search over threshold functions: grid on q in [0,1) followed by
// golden-section refinement around the best grid point (bracket <= 1e-6).
std::pair<double, double> worst_case_ratio(const GammaDistribution& dist, GameVariant variant,
                                           double eps7, double q_grid_step);

// TSV rows (q, value) over the grid, for plotting.
std::string game_profile_tsv(const GammaDistribution& dist, GameVariant variant, double eps7,
                             double q_grid_step);

}  // namespace ufl
