#pragma once

#include <cmath>
#include <vector>

#include "ufl/common.hpp"

namespace ufl {

using Point = std::vector<double>;

inline double distance(const Point& a, const Point& b) {
  if (a.size() != b.size())
    throw input_error("dimension mismatch in distance computation");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

// Angle at vertex `apex` formed by rays to a and b, in [0, pi]. Degenerate
// rays (zero length) yield angle 0.
inline double angle_at(const Point& apex, const Point& a, const Point& b) {
  if (apex.size() != a.size() || apex.size() != b.size())
    throw input_error("dimension mismatch in angle computation");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < apex.size(); ++k) {
    double u = a[k] - apex[k];
    double v = b[k] - apex[k];
    dot += u * v;
    na += u * u;
    nb += v * v;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = dot / std::sqrt(na * nb);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

}  // namespace ufl
