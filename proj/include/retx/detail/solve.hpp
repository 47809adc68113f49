#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "retx/error.hpp"

namespace retx::detail {

/// Safeguarded Newton iteration on a sign-changing bracket [lo, hi].
/// `f(u)` returns {value, derivative}. Falls back to bisection whenever the
/// Newton step leaves the bracket. Throws NonConvergence after `max_iter`.
template <class F>
double newton_bracketed(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  double flo = f(lo).first;
  const double fhi = f(hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) fail(Errc::NoRoot, "bracket does not change sign");

  double u = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [fu, du] = f(u);
    if (fu == 0.0) return u;
    if ((fu < 0.0) == (flo < 0.0)) {
      lo = u;
      flo = fu;
    } else {
      hi = u;
    }
    const double scale = std::max(1.0, std::fabs(u));
    double next = u - fu / du;
    const bool newton_ok = std::isfinite(next) && next > lo && next < hi;
    if (!newton_ok) next = 0.5 * (lo + hi);
    if (newton_ok && std::fabs(next - u) <= xtol * scale) return next;
    if (hi - lo <= xtol * scale) return 0.5 * (lo + hi);
    u = next;
  }
  fail(Errc::NonConvergence, "bracketed Newton exceeded iteration cap");
}

}  // namespace retx::detail
