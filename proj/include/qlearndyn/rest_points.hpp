#pragma once

// Interior rest points of the two-action dynamics.
//
// With u = logit(x), v = logit(y), rest points satisfy
//   u = b + a s(v),  v = d + c s(u),
// and eliminating v leaves the scalar equation
//   u/a - b/a = g(u),  g(u) = s(d + c s(u)).
// g is a sigmoid of a sigmoid: monotone with sign(c), and g' has a single
// extremum. The line therefore meets g at most three times, and the roots are
// isolated exactly by splitting the search interval at the (at most two)
// points where the line is tangent-parallel to g.

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "qlearndyn/game_model.hpp"
#include "qlearndyn/learning_dynamics.hpp"

namespace qlearndyn {

enum class Stability { kStableNode, kStableSpiral, kSaddleUnstable };
const char* to_string(Stability s);

struct StabilityInfo {
  std::array<std::complex<double>, 2> eigenvalues;  // -1 + r, -1 - r, r = sqrt(ac x(1-x) y(1-y))
  Stability stability;
  /// Max distance between the closed-form eigenvalues and those of a
  /// central-difference Jacobian of the flow.
  double fd_deviation;
};

struct RestPoint {
  StrategyPoint point;
  LogitPoint logit;
  std::array<std::complex<double>, 2> eigenvalues;
  Stability stability;
  /// Max-norm of the bracketed terms (a y + b - u, c x + d - v).
  double residual;
  double fd_deviation;
  /// Tangent root, or one of two roots closer than kTangencyPairGap in u.
  bool degenerate = false;
};

inline constexpr double kTangencyPairGap = 1e-7;

/// g(u) = s(d + c s(u)) with its first two derivatives.
struct GFunction {
  double c;
  double d;
};

struct GValues {
  double g;
  double g1;
  double g2;
};

GValues g_eval(const GFunction& gf, double u);

/// Unique zero of g'' (the extremum of g'). Zero when c == 0.
double g_inflection(const GFunction& gf);

/// Tangent-line intercept g(u) - u g'(u).
double tangent_intercept(const GFunction& gf, double u);

/// Roots x in (0, 1) of a x + b = ln(x/(1-x)). A critical point whose residual
/// is within 1e-9 of zero is reported once as a tangent root.
std::vector<double> solve_symmetric(double a, double b);

/// Saddle-node curve of the symmetric equation: three roots iff b_minus < b < b_plus.
struct CriticalB {
  double b_minus;
  double b_plus;
};
CriticalB symmetric_critical_b(double a);

/// All interior rest points, sorted by u.
std::vector<RestPoint> solve_general(const ReducedCoefficients& k);

/// Number of interior rest points (no stability work).
int count_rest_points(const ReducedCoefficients& k);

/// Eigenvalues of the Jacobian at an interior rest point. Throws DomainError
/// if `point` does not satisfy the rest-point equations.
StabilityInfo stability_eigenvalues(const StrategyPoint& point, const ReducedCoefficients& k);
/// Same, for a point given in logit coordinates (no precision loss near the
/// boundary of the square).
StabilityInfo stability_eigenvalues(const LogitPoint& point, const ReducedCoefficients& k);

struct TangencyDiagnostics {
  bool ac_bound_met;  // ac >= 16
  double cond_u;      // ac - 4 cosh^2(u/2) / (g (1 - g))
};

/// Evaluated at u; zero where the line u/a - b/a is tangent to g.
TangencyDiagnostics tangency_conditions(const ReducedCoefficients& k, double u);
/// ac - 1/(x(1-x) y(1-y)), the same condition in strategy coordinates.
double tangency_condition_xy(const ReducedCoefficients& k, const StrategyPoint& p);

struct CriticalTemperatures {
  std::vector<double> temperatures;
  std::vector<double> u;
  std::vector<double> residuals;  // max-norm of the tangency system at each solution
};

/// Saddle-node temperatures on the diagonal T_X = T_Y = T. nullopt unless both
/// -b/a and -d/c lie in (0, 1). Throws NumericFailure if a located transition
/// cannot be polished to a tangency residual below 1e-8.
std::optional<CriticalTemperatures> critical_temperature_equal_T(const Game& game);

}  // namespace qlearndyn
