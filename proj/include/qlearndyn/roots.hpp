#pragma once

// Scalar root finding on a bracket: bisection down to adjacent doubles, then an
// optional Newton polish that is only accepted while it stays in the bracket
// and lowers |f|.

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace qlearndyn::roots {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Bisects f on [lo, hi] assuming sign(f(lo)) != sign(f(hi)), both nonzero.
/// Stops when the midpoint is no longer representable between the ends.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  const int s_lo = sign_of(f_lo);
  for (int it = 0; it < 2200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = f(mid);
    const int s = sign_of(fm);
    if (s == 0) return mid;
    if (s == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

/// Newton iterations from x, constrained to [lo, hi]. Returns the best point seen.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double lo, double hi, int max_iter = 8) {
  double best = x;
  double best_abs = std::abs(f(x));
  for (int it = 0; it < max_iter && best_abs > 0.0; ++it) {
    const double d = df(best);
    if (!(std::abs(d) > 0.0) || !std::isfinite(d)) break;
    const double next = best - f(best) / d;
    if (!(next >= lo && next <= hi)) break;
    const double fa = std::abs(f(next));
    if (!(fa < best_abs)) break;
    best = next;
    best_abs = fa;
  }
  return best;
}

/// Root of a function that is monotone on [lo, hi], if it changes sign there.
/// Exact zeros at either end are not reported (callers track those separately).
template <class F>
std::optional<double> monotone_root(F&& f, double lo, double hi) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  const int s_lo = sign_of(f_lo);
  const int s_hi = sign_of(f_hi);
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) return std::nullopt;
  return bisect(f, lo, hi, f_lo);
}

/// Minimizes a unimodal function on [lo, hi] by golden-section search.
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, int iters = 200) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters && (hi - lo) > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace qlearndyn::roots
