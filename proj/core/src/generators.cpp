#include "ufl/generators.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ufl/common.hpp"
#include "ufl/quadrature.hpp"
#include "ufl/rng.hpp"

namespace ufl {

GenProfile profile_from_string(const std::string& s) {
  if (s == "uniform_box") return GenProfile::uniform_box;
  if (s == "clustered_blobs") return GenProfile::clustered_blobs;
  if (s == "colinear_adversarial") return GenProfile::colinear_adversarial;
  throw input_error("unknown generator profile: '" + s + "'");
}

std::string to_string(GenProfile p) {
  switch (p) {
    case GenProfile::uniform_box: return "uniform_box";
    case GenProfile::clustered_blobs: return "clustered_blobs";
    case GenProfile::colinear_adversarial: return "colinear_adversarial";
  }
  return "?";
}

void GenSpec::validate() const {
  if (dim < 1) throw input_error("dim must be >= 1");
  if (n_facilities < 1) throw input_error("n_facilities must be >= 1");
  if (n_clients < 1) throw input_error("n_clients must be >= 1");
  if (!(cost_lo >= 0.0 && cost_lo <= cost_hi))
    throw input_error("cost range must satisfy 0 <= lo <= hi");
  if (!(coordinate_scale > 0.0)) throw input_error("coordinate_scale must be positive");
}

namespace {

// Box-Muller from the portable uniform stream; two uniforms per draw so the
// stream layout is fixed.
double gaussian(std::mt19937_64& eng) {
  double u1 = 1.0 - uniform01(eng);  // (0, 1]
  double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

Point uniform_point(std::mt19937_64& eng, int dim, double scale) {
  Point p(dim);
  for (int k = 0; k < dim; ++k) p[k] = uniform_in(eng, 0.0, scale);
  return p;
}

}  // namespace

Instance generate_random(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 eng = make_engine(spec.seed, 0);
  Instance inst;
  inst.dim = spec.dim;
  inst.facilities.reserve(spec.n_facilities);
  inst.clients.reserve(spec.n_clients);

  switch (spec.profile) {
    case GenProfile::uniform_box: {
      for (int i = 0; i < spec.n_facilities; ++i) {
        Facility f;
        f.id = i;
        f.open_cost = uniform_in(eng, spec.cost_lo, spec.cost_hi);
        f.location = uniform_point(eng, spec.dim, spec.coordinate_scale);
        inst.facilities.push_back(std::move(f));
      }
      for (int j = 0; j < spec.n_clients; ++j) {
        Client c;
        c.id = j;
        c.location = uniform_point(eng, spec.dim, spec.coordinate_scale);
        inst.clients.push_back(std::move(c));
      }
      break;
    }
    case GenProfile::clustered_blobs: {
      int n_blobs = 1;
      while ((n_blobs + 1) * (n_blobs + 1) <= spec.n_facilities + spec.n_clients) ++n_blobs;
      std::vector<Point> centers;
      centers.reserve(n_blobs);
      for (int b = 0; b < n_blobs; ++b)
        centers.push_back(uniform_point(eng, spec.dim, spec.coordinate_scale));
      double sigma = spec.coordinate_scale / 10.0;
      auto blob_point = [&](std::mt19937_64& e) {
        std::size_t b = static_cast<std::size_t>(uniform01(e) * n_blobs);
        if (b >= centers.size()) b = centers.size() - 1;
        Point p = centers[b];
        for (int k = 0; k < spec.dim; ++k) p[k] += sigma * gaussian(e);
        return p;
      };
      for (int i = 0; i < spec.n_facilities; ++i) {
        Facility f;
        f.id = i;
        f.open_cost = uniform_in(eng, spec.cost_lo, spec.cost_hi);
        f.location = blob_point(eng);
        inst.facilities.push_back(std::move(f));
      }
      for (int j = 0; j < spec.n_clients; ++j) {
        Client c;
        c.id = j;
        c.location = blob_point(eng);
        inst.clients.push_back(std::move(c));
      }
      break;
    }
    case GenProfile::colinear_adversarial: {
      // Facilities fan out along -x with small transverse offsets; clients
      // form a tight clump at +x. Seen from the clump, all facilities lie
      // in a narrow angular region on the opposite side, and client-client
      // distances are tiny compared to client-facility distances.
      double scale = spec.coordinate_scale;
      for (int i = 0; i < spec.n_facilities; ++i) {
        Facility f;
        f.id = i;
        f.open_cost = uniform_in(eng, spec.cost_lo, spec.cost_hi);
        Point p(spec.dim, 0.0);
        p[0] = -scale * (1.0 + static_cast<double>(i) / spec.n_facilities);
        for (int k = 1; k < spec.dim; ++k) p[k] = 1e-3 * scale * gaussian(eng);
        f.location = std::move(p);
        inst.facilities.push_back(std::move(f));
      }
      for (int j = 0; j < spec.n_clients; ++j) {
        Client c;
        c.id = j;
        Point p(spec.dim, 0.0);
        p[0] = scale;
        for (int k = 0; k < spec.dim; ++k) p[k] += 1e-8 * scale * gaussian(eng);
        c.location = std::move(p);
        inst.clients.push_back(std::move(c));
      }
      break;
    }
  }
  inst.validate();
  return inst;
}

void GraphInput::validate() const {
  if (n_vertices < 1) throw input_error("graph must have at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 1 || u > n_vertices || v < 1 || v > n_vertices)
      throw input_error("edge endpoint out of range");
    if (u == v) throw input_error("self-loop in graph");
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second)
      throw input_error("duplicate edge in graph");
  }
}

GraphInput parse_graph(std::istream& in) {
  GraphInput g;
  long long m = 0;
  if (!(in >> g.n_vertices >> m)) throw input_error("bad graph header, expected 'n m'");
  if (m < 0) throw input_error("negative edge count");
  g.edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    int u = 0, v = 0;
    if (!(in >> u >> v)) throw input_error("unexpected end of graph edge list");
    g.edges.emplace_back(u, v);
  }
  std::string rest;
  if (in >> rest) throw input_error("trailing content in graph input: '" + rest + "'");
  g.validate();
  return g;
}

GraphInput parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

GraphInput load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open graph file: " + path);
  return parse_graph(in);
}

double norm_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw input_error("normal quantile needs p in (0,1)");
  // Acklam's rational approximation, then two Newton corrections.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int it = 0; it < 2; ++it) {
    double e = norm_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
    if (pdf > 0.0) x -= e / pdf;
  }
  return x;
}

namespace {

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
}

}  // namespace

double gamma_corr(double rho, double mu) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw input_error("correlation must lie in [-1,1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw input_error("mu must lie in [0,1]");
  if (mu == 0.0) return 0.0;
  if (mu == 1.0) return 1.0;
  if (rho >= 1.0 - 1e-12) return mu;                       // Y = X
  if (rho <= -1.0 + 1e-12) return std::max(0.0, 2.0 * mu - 1.0);  // Y = -X
  if (std::fabs(rho) < 1e-15) return mu * mu;
  double h = norm_quantile(mu);
  double s = std::sqrt(1.0 - rho * rho);
  auto f = [h, rho, s](double x) { return norm_pdf(x) * norm_cdf((h - rho * x) / s); };
  double lo = std::min(-8.5, h - 1.0);  // below -8.5 the integrand is < 1e-16
  return integrate(f, lo, h, 1e-9);
}

double hardness_lambda(const GraphInput& graph, double q) {
  if (!(q > 0.0 && q < 0.5)) throw input_error("q must lie in (0, 1/2)");
  double rho = -q / (1.0 - q);
  double h = 1e-5;
  double deriv = (gamma_corr(rho, q + h) - gamma_corr(rho, q - h)) / (2.0 * h);
  double m = static_cast<double>(graph.edges.size());
  double n = static_cast<double>(graph.n_vertices);
  return (m / n) * (std::sqrt(3.0) - 1.0) * deriv;
}

Instance generate_hardness(const GraphInput& graph, double q,
                           std::optional<double> lambda_override) {
  graph.validate();
  if (graph.edges.empty()) throw input_error("hardness reduction needs at least one edge");
  if (!(q > 0.0 && q < 0.5)) throw input_error("q must lie in (0, 1/2)");
  double lambda;
  if (lambda_override) {
    if (!(*lambda_override >= 0.0)) throw input_error("lambda override must be nonnegative");
    lambda = *lambda_override;
  } else {
    lambda = hardness_lambda(graph, q);
  }
  Instance inst;
  inst.dim = graph.n_vertices;
  inst.facilities.reserve(graph.n_vertices);
  for (int v = 1; v <= graph.n_vertices; ++v) {
    Facility f;
    f.id = v - 1;
    f.open_cost = lambda;
    f.location.assign(inst.dim, 0.0);
    f.location[v - 1] = 1.0;
    inst.facilities.push_back(std::move(f));
  }
  inst.clients.reserve(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    auto [u, v] = graph.edges[e];
    Client c;
    c.id = static_cast<int>(e);
    c.location.assign(inst.dim, 0.0);
    c.location[u - 1] = 1.0;
    c.location[v - 1] = 1.0;
    inst.clients.push_back(std::move(c));
  }
  inst.validate();
  return inst;
}

}  // namespace ufl
