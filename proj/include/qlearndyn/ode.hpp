#pragma once

// Dormand-Prince 5(4) with embedded error control and FSAL reuse.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace qlearndyn::ode {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double initial_step = 1e-3;
  double max_step = 10.0;
  std::size_t max_steps = 20'000'000;
};

enum class StopReason { kPredicate, kMaxTime, kStepFailure };

struct RunResult {
  StopReason reason;
  double t;
  std::size_t accepted;
  std::size_t rejected;
};

namespace detail {

inline constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Fifth-order weights minus fourth-order weights.
inline constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,           -71.0 / 16695,
                                          71.0 / 1920,       -17253.0 / 339200, 22.0 / 525,
                                          -1.0 / 40};

}  // namespace detail

/// Integrates y' = rhs(t, y, dydt) from t0 towards t_max.
///
/// `observe(t, y, dydt)` is called for every accepted state including the
/// initial one. `stop(t, y, dydt)` is checked on the same states; returning
/// true ends the run with kPredicate.
template <class Rhs, class Observe, class Stop>
RunResult dopri5(Rhs&& rhs, std::vector<double> y, double t0, double t_max, const StepControl& ctl,
                 Observe&& observe, Stop&& stop) {
  using detail::kA;
  using detail::kC;
  using detail::kE;
  const std::size_t n = y.size();
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.assign(n, 0.0);
  std::vector<double> tmp(n), y_new(n);

  double t = t0;
  rhs(t, y, k[0]);
  observe(t, y, k[0]);
  if (stop(t, y, k[0])) return {StopReason::kPredicate, t, 0, 0};

  double h = std::min(ctl.initial_step, t_max - t);
  std::size_t accepted = 0, rejected = 0;
  while (t < t_max) {
    if (accepted + rejected >= ctl.max_steps) return {StopReason::kStepFailure, t, accepted, rejected};
    const double h_floor = 1e-14 * std::max(1.0, std::abs(t));
    if (h < h_floor) return {StopReason::kStepFailure, t, accepted, rejected};
    h = std::min(h, t_max - t);

    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        tmp[i] = y[i] + h * acc;
      }
      rhs(t + kC[s] * h, tmp, k[s]);
      if (s == 6) y_new = tmp;
    }

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      double e = 0.0;
      for (int s = 0; s < 7; ++s) e += kE[s] * k[s][i];
      e *= h;
      const double scale = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double r = e / scale;
      err += r * r;
      finite = finite && std::isfinite(y_new[i]);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!finite || !std::isfinite(err)) {
      h *= 0.1;
      ++rejected;
      continue;
    }

    if (err <= 1.0) {
      t = (t_max - t - h <= 1e-15 * std::max(1.0, std::abs(t_max))) ? t_max : t + h;
      y.swap(y_new);
      k[0].swap(k[6]);
      ++accepted;
      observe(t, y, k[0]);
      if (stop(t, y, k[0])) return {StopReason::kPredicate, t, accepted, rejected};
      const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h * grow, ctl.max_step);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      ++rejected;
    }
  }
  return {StopReason::kMaxTime, t, accepted, rejected};
}

}  // namespace qlearndyn::ode
