#pragma once

// Rest-point structure as a function of the exploration rates: temperature
// sweeps with branch continuation, pitchfork classification, critical
// T_X-windows for fixed T_Y, and the tangent-intercept bounds that delimit
// which games can have three rest points at all.

#include <optional>
#include <vector>

#include "qlearndyn/game_model.hpp"
#include "qlearndyn/rest_points.hpp"

namespace qlearndyn {

enum class SweepAxis { kEqual, kTxAtFixedTy, kTyAtFixedTx };
enum class PitchforkKind { kNone, kContinuous, kDiscontinuous };

const char* to_string(SweepAxis axis);
const char* to_string(PitchforkKind kind);

struct BranchSample {
  double temperature;
  RestPoint rest;
};

struct Branch {
  int id;
  std::vector<BranchSample> samples;
};

/// Rest points next to the last saddle-node on the sweep axis.
struct PitchforkEvidence {
  double critical_temperature;
  /// Largest pairwise (x, y) distance among the three rest points at T_c - 1e-4.
  double max_separation;
  /// Smallest distance from the survivor to the two vanishing rest points.
  double vanishing_to_survivor;
  StrategyPoint survivor;  // the single rest point at T_c + 1e-4
};

struct BifurcationDiagram {
  SweepAxis axis = SweepAxis::kEqual;
  std::optional<double> fixed_value;
  std::vector<Branch> branches;
  /// Temperatures where the rest-point count changes, refined by bisection.
  std::vector<double> critical_temperatures;
  std::optional<PitchforkKind> pitchfork_kind;
  std::optional<PitchforkEvidence> evidence;
};

inline constexpr double kBranchContinuity = 0.05;
inline constexpr double kPitchforkOffset = 1e-4;

/// General sweep. For kEqual `fixed` is ignored; otherwise it is the held
/// temperature of the other player.
BifurcationDiagram sweep(const Game& game, SweepAxis axis, double fixed, double t_min, double t_max, int steps);

/// Log-spaced sweep along T_X = T_Y = T.
BifurcationDiagram sweep_equal_T(const Game& game, double t_min, double t_max, int steps);

/// Closed-form test: continuous iff a~ = c~ and b/a + d/c = -1 (coordination)
/// or b/a = d/c (anti-coordination); discontinuous for other games with three
/// Nash equilibria; none otherwise.
PitchforkKind classify_pitchfork(const Game& game);

/// Numerical evidence for the pitchfork type at the highest saddle-node on
/// the equal-temperature axis, searched in (t_min, t_max). nullopt if the count
/// never drops from three to one.
std::optional<PitchforkEvidence> pitchfork_evidence(const Game& game, double t_min, double t_max);

struct InterceptSample {
  double temperature;  // T_Y
  double u_inflection;
  double delta_at_inflection;
  double delta_at_zero;
};

struct InterceptProfile {
  std::vector<InterceptSample> samples;
  double delta_min;
  double delta_max;
  /// Infimum / supremum is infinite (approached as T_Y -> 0).
  bool min_unbounded = false;
  bool max_unbounded = false;
};

/// Extrema of the tangent intercept g(u) - u g'(u) over u and a log grid of
/// T_Y in [t_min, t_max], for g built from c = c~/T_Y, d = d~/T_Y.
InterceptProfile delta_extrema(double c_tilde, double d_tilde, double t_min, double t_max, int steps);

struct InterceptExtrema {
  double min;
  double max;
  bool min_unbounded;
  bool max_unbounded;
};

/// Global intercept extrema over all u and all T_Y > 0 for c > 0 and the
/// given ratio d/c (the boundaries used by classify_region).
InterceptExtrema intercept_extrema(double d_over_c);

enum class CurveOrientation { kTxAtFixedTy, kTyAtFixedTx };

struct CriticalSample {
  double t_fixed;
  /// Window of the swept temperature with three rest points. A lower edge of
  /// 0 means the window reaches down to zero; nullopt upper edge means it is
  /// unbounded above. Both nullopt: no window.
  std::optional<double> c_minus;
  std::optional<double> c_plus;
  /// Tangency temperatures found (sorted), and max tangency residual.
  std::vector<double> tangencies;
  double residual = 0.0;
  bool gap = false;  // tangency solve failed at this grid point
};

struct CriticalCurve {
  CurveOrientation orientation;
  std::vector<CriticalSample> samples;
  /// Fixed temperature above which the window closes, bisected to 1e-6.
  std::optional<double> closing_temperature;
};

/// Three-rest-point window of the swept temperature at one fixed temperature.
CriticalSample critical_window(const Game& game, CurveOrientation orientation, double t_fixed);

CriticalCurve critical_curve(const Game& game, CurveOrientation orientation, const std::vector<double>& grid);

struct LowTemperatureWindowLimits {
  double u_tilde;
  double tx_c_minus;
  double tx_c_plus;
};

/// T_Y -> 0 limits of the window for b/a > 0, -1 < d/c < -1/2 (and the
/// region mirrored by relabeling both players' actions).
LowTemperatureWindowLimits low_temperature_window_limits(double b_over_a, double d_over_c, double a_tilde);

struct CuspPoint {
  double a;
  double b;
};

/// Meeting point of the two symmetric saddle-node curves.
CuspPoint cusp_locate();

}  // namespace qlearndyn
