#pragma once

#include <cmath>

namespace ufl {

namespace detail {

template <typename F>
double adaptive_simpson(const F& f, double lo, double hi, double flo, double fmid,
                        double fhi, double whole, double tol, int depth) {
  double mid = 0.5 * (lo + hi);
  double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
  double flm = f(lmid), frm = f(rmid);
  double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [lo, hi] with absolute error target
// tol. The integrand must be smooth on the interval; callers split at known
// kinks before integrating.
template <typename F>
double integrate(const F& f, double lo, double hi, double tol) {
  if (!(hi > lo)) return 0.0;
  double mid = 0.5 * (lo + hi);
  double flo = f(lo), fmid = f(mid), fhi = f(hi);
  double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return detail::adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

}  // namespace ufl
