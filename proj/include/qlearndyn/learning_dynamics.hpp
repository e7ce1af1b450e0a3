#pragma once

// Continuous-time Boltzmann Q-learning dynamics.
//
// Two-action form, with x and y the probabilities of action 1:
//   x' = x(1-x) [ (a y + b) - ln(x/(1-x)) ]
//   y' = y(1-y) [ (c x + d) - ln(y/(1-y)) ]
// In logit coordinates u = ln(x/(1-x)), v = ln(y/(1-y)) this becomes
//   u' = a s(v) + b - u,  v' = c s(u) + d - v,  s = logistic,
// which is smooth on the whole plane. All trajectories are integrated there.

#include <cstddef>
#include <utility>
#include <vector>

#include "qlearndyn/game_model.hpp"

namespace qlearndyn {

struct StrategyPoint {
  double x;
  double y;
};

struct LogitPoint {
  double u;
  double v;
};

double logistic(double z);
/// logistic(z) * logistic(-z), accurate for large |z|.
double logistic_slope(double z);
double logit(double p);

LogitPoint to_logit(const StrategyPoint& p);
StrategyPoint from_logit(const LogitPoint& q);

/// Two-action right-hand side in (x, y). Throws DomainError off the open
/// square; the log term is evaluated with x clamped to [1e-12, 1 - 1e-12].
std::pair<double, double> velocity_2action(const StrategyPoint& p, const ReducedCoefficients& k);

/// Same field in logit coordinates.
std::pair<double, double> logit_velocity(const LogitPoint& q, const ReducedCoefficients& k);

/// n-action bi-matrix replicator field with entropic exploration terms:
///   x_i' = x_i [ (A y)_i - x.A y + T_X sum_j x_j ln(x_j / x_i) ]
/// and the analogue for y with B and T_Y. For n = 2 the first components equal
/// T_X and T_Y times velocity_2action.
std::pair<std::vector<double>, std::vector<double>> velocity_naction(const std::vector<double>& x,
                                                                     const std::vector<double>& y,
                                                                     const Game& game,
                                                                     const Temperatures& temps);

/// Single-agent exploration-replicator field against fixed action rewards.
std::vector<double> single_agent_velocity(const std::vector<double>& x, const std::vector<double>& rewards,
                                          double temp);

/// dQ_i/dt = alpha (r_i - Q_i), r = payoff * opponent.
std::vector<double> q_space_velocity(const std::vector<double>& qvals, const std::vector<double>& opponent,
                                     const PayoffMatrix& payoff, double alpha);

/// Boltzmann weights exp(r_i/T) / sum_k exp(r_k/T), max-shifted.
std::vector<double> gibbs_steady_state(const std::vector<double>& rewards, double temp);

/// Phi(x) = -sum r_k x_k + T sum x_k ln x_k. Zero components are a DomainError
/// unless allow_zero, in which case 0 ln 0 = 0.
double free_energy(const std::vector<double>& x, const std::vector<double>& rewards, double temp,
                   bool allow_zero = false);

/// Phase-space contraction rate -(T_X + T_Y)(n - 1).
double dissipation_rate(const Temperatures& temps, std::size_t n);

/// Central-difference divergence of the field in coordinates
/// u_k = ln(x_{k+1}/x_1), v_k = ln(y_{k+1}/y_1), obtained from velocity_naction.
double divergence_check(const std::vector<double>& u, const std::vector<double>& v, const Game& game,
                        const Temperatures& temps, double step = 1e-5);
/// Two-action overload taking the logit point of (x, y).
double divergence_check(const LogitPoint& q, const Game& game, const Temperatures& temps, double step = 1e-5);

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_time = 1e4;
  double convergence_speed_tol = 1e-10;
  double boundary_clamp = 1e-12;
};

enum class TerminalReason { kConverged, kMaxTime, kStepFailure };
const char* to_string(TerminalReason r);

struct TrajectorySample {
  double t;
  StrategyPoint point;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TerminalReason terminal_reason = TerminalReason::kMaxTime;

  const StrategyPoint& final_point() const { return samples.back().point; }
  /// Logit coordinates of the final state, before mapping back to (x, y).
  LogitPoint final_logit{};
};

/// Adaptive Dormand-Prince integration of the two-action dynamics from an
/// interior start. Stops with kConverged once the (u, v) field max-norm drops
/// below cfg.convergence_speed_tol. Never throws on step failure.
Trajectory integrate(const StrategyPoint& start, const ReducedCoefficients& k, const IntegratorConfig& cfg = {});

struct SimplexTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> points;
  TerminalReason terminal_reason = TerminalReason::kMaxTime;
};

/// Integrates single_agent_velocity in the simplex from an interior start.
SimplexTrajectory integrate_single_agent(const std::vector<double>& start, const std::vector<double>& rewards,
                                         double temp, const IntegratorConfig& cfg = {});

}  // namespace qlearndyn
