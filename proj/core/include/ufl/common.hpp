#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ufl {

// Thrown for malformed input: bad files, infeasible parameter combinations,
// out-of-range arguments. The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numeric routine fails to converge (LP iteration cap,
// root-finding bracket failure, ...). The CLI maps this to exit code 3.
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |a - b| <= tol, the comparison used throughout for "equal up to noise".
inline bool approx_eq(double a, double b, double tol) {
  return std::fabs(a - b) <= tol;
}

// a <= b + tol
inline bool leq_tol(double a, double b, double tol) {
  return a <= b + tol;
}

// Shortest decimal string that round-trips to exactly the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Strict double parse; rejects trailing garbage.
inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw input_error("bad floating point literal: '" + std::string(s) + "'");
  return v;
}

inline long long parse_int(std::string_view s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw input_error("bad integer literal: '" + std::string(s) + "'");
  return v;
}

}  // namespace ufl
