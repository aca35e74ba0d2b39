#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ufl/instance.hpp"

namespace ufl {

enum class GenProfile { uniform_box, clustered_blobs, colinear_adversarial };

GenProfile profile_from_string(const std::string& s);
std::string to_string(GenProfile p);

struct GenSpec {
  std::uint64_t seed = 0;
  int dim = 2;
  int n_facilities = 1;
  int n_clients = 1;
  double cost_lo = 0.0;
  double cost_hi = 1.0;
  double coordinate_scale = 1.0;
  GenProfile profile = GenProfile::uniform_box;

  void validate() const;  // throws input_error
};

// Seeded instance generation; byte-identical output for identical spec.
//  - uniform_box: all points uniform in [0, scale]^dim.
//  - clustered_blobs: uniform blob centers, Gaussian offsets (sigma = scale/10).
//  - colinear_adversarial: a near-colinear fan of facilities on one side and
//    a dense client clump (relative jitter 1e-8) on the opposite side, so
//    rerouting bounds through the clump are nearly tight and all clump
//    clients fall into one narrow value band.
Instance generate_random(const GenSpec& spec);

struct GraphInput {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // 1-based vertex pairs

  void validate() const;  // throws input_error
};

// Format: first line "n m", then m lines "u v" (1-based vertices).
GraphInput parse_graph(std::istream& in);
GraphInput parse_graph_string(const std::string& text);
GraphInput load_graph_file(const std::string& path);

// Standard normal CDF and its inverse (absolute error < 1e-14).
double norm_cdf(double x);
double norm_quantile(double p);

// P[X <= Phi^-1(mu) and Y <= Phi^-1(mu)] for standard bivariate normal
// (X, Y) with correlation rho; adaptive quadrature, absolute error <= 1e-8.
double gamma_corr(double rho, double mu);

// Facility cost of the graph reduction when no override is given:
// (m/n) * (sqrt(3)-1) * d/dmu gamma_corr(-q/(1-q), mu) at mu = q,
// central finite difference with h = 1e-5.
double hardness_lambda(const GraphInput& graph, double q);

// Graph reduction: n-dimensional space, facility i at unit vector e_i with
// cost lambda, one client per edge (u,v) at e_u + e_v. Every client then
// sits at distance 1 from its two endpoint facilities and sqrt(3) from all
// others.
Instance generate_hardness(const GraphInput& graph, double q,
                           std::optional<double> lambda_override = std::nullopt);

}  // namespace ufl
