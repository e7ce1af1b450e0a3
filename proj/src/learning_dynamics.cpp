#include "qlearndyn/learning_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qlearndyn/errors.hpp"
#include "qlearndyn/ode.hpp"

namespace qlearndyn {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_slope(double z) {
  const double e = std::exp(-std::abs(z));
  const double d = 1.0 + e;
  return e / (d * d);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

LogitPoint to_logit(const StrategyPoint& p) { return {logit(p.x), logit(p.y)}; }
StrategyPoint from_logit(const LogitPoint& q) { return {logistic(q.u), logistic(q.v)}; }

namespace {

constexpr double kRhsClamp = 1e-12;

void require_interior(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + " must lie strictly inside (0, 1)");
}

void require_simplex(const std::vector<double>& x, const char* what) {
  double s = 0.0;
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be strictly positive");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw DomainError(std::string(what) + " must sum to 1");
}

// Per-capita growth rates of the exploration-replicator field.
std::vector<double> growth_rates(const std::vector<double>& x, const std::vector<double>& rewards, double temp) {
  const std::size_t n = x.size();
  const double mean = std::inner_product(x.begin(), x.end(), rewards.begin(), 0.0);
  double x_log_x = 0.0;
  for (double v : x) x_log_x += v * std::log(v);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    // sum_j x_j ln(x_j / x_i) = sum_j x_j ln x_j - ln x_i
    g[i] = rewards[i] - mean + temp * (x_log_x - std::log(x[i]));
  }
  return g;
}

// Simplex point from log-ratio coordinates u_k = ln(x_{k+1} / x_1).
std::vector<double> simplex_from_ratios(const std::vector<double>& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, v);
  std::vector<double> x(u.size() + 1);
  x[0] = std::exp(-m);
  double s = x[0];
  for (std::size_t k = 0; k < u.size(); ++k) {
    x[k + 1] = std::exp(u[k] - m);
    s += x[k + 1];
  }
  for (double& v : x) v /= s;
  return x;
}

}  // namespace

std::pair<double, double> velocity_2action(const StrategyPoint& p, const ReducedCoefficients& k) {
  require_interior(p.x, "x");
  require_interior(p.y, "y");
  const double xc = std::clamp(p.x, kRhsClamp, 1.0 - kRhsClamp);
  const double yc = std::clamp(p.y, kRhsClamp, 1.0 - kRhsClamp);
  const double dx = p.x * (1.0 - p.x) * ((k.a * p.y + k.b) - logit(xc));
  const double dy = p.y * (1.0 - p.y) * ((k.c * p.x + k.d) - logit(yc));
  return {dx, dy};
}

std::pair<double, double> logit_velocity(const LogitPoint& q, const ReducedCoefficients& k) {
  return {k.a * logistic(q.v) + k.b - q.u, k.c * logistic(q.u) + k.d - q.v};
}

std::pair<std::vector<double>, std::vector<double>> velocity_naction(const std::vector<double>& x,
                                                                     const std::vector<double>& y,
                                                                     const Game& game,
                                                                     const Temperatures& temps) {
  const std::size_t n = game.actions();
  if (x.size() != n || y.size() != n) throw DomainError("strategy size does not match the game");
  require_simplex(x, "x");
  require_simplex(y, "y");
  auto gx = growth_rates(x, game.A.expected_rewards(y), temps.tx);
  auto gy = growth_rates(y, game.B.expected_rewards(x), temps.ty);
  for (std::size_t i = 0; i < n; ++i) {
    gx[i] *= x[i];
    gy[i] *= y[i];
  }
  return {std::move(gx), std::move(gy)};
}

std::vector<double> single_agent_velocity(const std::vector<double>& x, const std::vector<double>& rewards,
                                          double temp) {
  if (x.size() != rewards.size()) throw DomainError("strategy and rewards differ in size");
  require_simplex(x, "x");
  auto g = growth_rates(x, rewards, temp);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] *= x[i];
  return g;
}

std::vector<double> q_space_velocity(const std::vector<double>& qvals, const std::vector<double>& opponent,
                                     const PayoffMatrix& payoff, double alpha) {
  if (qvals.size() != payoff.size()) throw std::invalid_argument("Q vector has wrong size");
  auto r = payoff.expected_rewards(opponent);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = alpha * (r[i] - qvals[i]);
  return r;
}

std::vector<double> gibbs_steady_state(const std::vector<double>& rewards, double temp) {
  if (!(temp > 0.0)) throw DomainError("temperature must be positive");
  if (rewards.empty()) return {};
  const double m = *std::max_element(rewards.begin(), rewards.end());
  std::vector<double> w(rewards.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp((rewards[i] - m) / temp);
    s += w[i];
  }
  for (double& v : w) v /= s;
  return w;
}

double free_energy(const std::vector<double>& x, const std::vector<double>& rewards, double temp,
                   bool allow_zero) {
  if (x.size() != rewards.size()) throw DomainError("strategy and rewards differ in size");
  double energy = 0.0;
  double neg_entropy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < 0.0 || (x[k] == 0.0 && !allow_zero)) throw DomainError("free energy needs a positive strategy");
    energy -= rewards[k] * x[k];
    if (x[k] > 0.0) neg_entropy += x[k] * std::log(x[k]);
  }
  return energy + temp * neg_entropy;
}

double dissipation_rate(const Temperatures& temps, std::size_t n) {
  if (n < 2) throw DomainError("need at least two actions");
  return -(temps.tx + temps.ty) * static_cast<double>(n - 1);
}

double divergence_check(const std::vector<double>& u, const std::vector<double>& v, const Game& game,
                        const Temperatures& temps, double step) {
  const std::size_t m = game.actions() - 1;
  if (u.size() != m || v.size() != m) throw DomainError("log-ratio vectors have wrong size");

  // Field in (u, v): u_k' = x_{k+1}'/x_{k+1} - x_1'/x_1.
  auto field = [&](const std::vector<double>& uu, const std::vector<double>& vv) {
    const auto x = simplex_from_ratios(uu);
    const auto y = simplex_from_ratios(vv);
    const auto gx = growth_rates(x, game.A.expected_rewards(y), temps.tx);
    const auto gy = growth_rates(y, game.B.expected_rewards(x), temps.ty);
    std::vector<double> out(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
      out[k] = gx[k + 1] - gx[0];
      out[m + k] = gy[k + 1] - gy[0];
    }
    return out;
  };

  double div = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    auto up = u, um = u;
    up[k] += step;
    um[k] -= step;
    div += (field(up, v)[k] - field(um, v)[k]) / (2.0 * step);
    auto vp = v, vm = v;
    vp[k] += step;
    vm[k] -= step;
    div += (field(u, vp)[m + k] - field(u, vm)[m + k]) / (2.0 * step);
  }
  return div;
}

double divergence_check(const LogitPoint& q, const Game& game, const Temperatures& temps, double step) {
  game.require_two_action();
  // ln(x_2/x_1) = -logit(x).
  return divergence_check(std::vector<double>{-q.u}, std::vector<double>{-q.v}, game, temps, step);
}

const char* to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::kConverged: return "converged";
    case TerminalReason::kMaxTime: return "max_time";
    case TerminalReason::kStepFailure: return "step_failure";
  }
  return "?";
}

namespace {

ode::StepControl step_control(const IntegratorConfig& cfg, double relax_rate) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.max_time > 0.0) ||
      !(cfg.convergence_speed_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances and max_time must be positive");
  }
  if (!(cfg.boundary_clamp > 0.0) || cfg.boundary_clamp > 1e-9) {
    throw std::invalid_argument("boundary_clamp must lie in (0, 1e-9]");
  }
  ode::StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  // Steps much beyond 1/rate park dopri5 on its stability edge near an
  // attractor, where the error estimate (and so the field norm) stalls near
  // rel_tol * |y| instead of decaying.
  ctl.max_step = 1.0 / relax_rate;
  return ctl;
}

TerminalReason terminal(ode::StopReason r) {
  switch (r) {
    case ode::StopReason::kPredicate: return TerminalReason::kConverged;
    case ode::StopReason::kMaxTime: return TerminalReason::kMaxTime;
    case ode::StopReason::kStepFailure: return TerminalReason::kStepFailure;
  }
  return TerminalReason::kStepFailure;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace

Trajectory integrate(const StrategyPoint& start, const ReducedCoefficients& k, const IntegratorConfig& cfg) {
  require_interior(start.x, "start x");
  require_interior(start.y, "start y");
  // Logit-space Jacobians have eigenvalues -1 +- sqrt(ac s(u) s(v)), s <= 1/4.
  const auto ctl = step_control(cfg, 1.0 + 0.25 * std::sqrt(std::abs(k.a * k.c)));
  const double lo = cfg.boundary_clamp;
  const double hi = 1.0 - cfg.boundary_clamp;
  const StrategyPoint s0{std::clamp(start.x, lo, hi), std::clamp(start.y, lo, hi)};

  Trajectory traj;
  auto rhs = [&](double, const std::vector<double>& q, std::vector<double>& dq) {
    const auto [du, dv] = logit_velocity({q[0], q[1]}, k);
    dq[0] = du;
    dq[1] = dv;
  };
  auto observe = [&](double t, const std::vector<double>& q, const std::vector<double>&) {
    if (!traj.samples.empty() && !(t > traj.samples.back().t)) return;
    traj.samples.push_back({t, {std::clamp(logistic(q[0]), lo, hi), std::clamp(logistic(q[1]), lo, hi)}});
    traj.final_logit = {q[0], q[1]};
  };
  auto stop = [&](double, const std::vector<double>&, const std::vector<double>& dq) {
    return max_abs(dq) < cfg.convergence_speed_tol;
  };
  const LogitPoint q0 = to_logit(s0);
  const auto run = ode::dopri5(rhs, std::vector<double>{q0.u, q0.v}, 0.0, cfg.max_time, ctl, observe, stop);
  traj.terminal_reason = terminal(run.reason);
  return traj;
}

SimplexTrajectory integrate_single_agent(const std::vector<double>& start, const std::vector<double>& rewards,
                                         double temp, const IntegratorConfig& cfg) {
  require_simplex(start, "start");
  if (start.size() != rewards.size()) throw DomainError("strategy and rewards differ in size");
  if (!(temp > 0.0)) throw DomainError("temperature must be positive");
  // The Gibbs state relaxes at rate temp.
  const auto ctl = step_control(cfg, temp);

  // In u_k = ln(x_{k+1} / x_1) the field is u_k' = (r_{k+1} - r_1) - temp u_k,
  // which keeps the state on the simplex (the x-space field does not: its
  // normal direction is unstable whenever the partition function is below 1).
  const std::size_t m = start.size() - 1;
  std::vector<double> u0(m);
  for (std::size_t k = 0; k < m; ++k) u0[k] = std::log(start[k + 1]) - std::log(start[0]);

  SimplexTrajectory traj;
  auto rhs = [&](double, const std::vector<double>& u, std::vector<double>& du) {
    for (std::size_t k = 0; k < m; ++k) du[k] = (rewards[k + 1] - rewards[0]) - temp * u[k];
  };
  auto observe = [&](double t, const std::vector<double>& u, const std::vector<double>&) {
    traj.times.push_back(t);
    traj.points.push_back(simplex_from_ratios(u));
  };
  auto stop = [&](double, const std::vector<double>&, const std::vector<double>& du) {
    return max_abs(du) < cfg.convergence_speed_tol;
  };
  const auto run = ode::dopri5(rhs, std::move(u0), 0.0, cfg.max_time, ctl, observe, stop);
  traj.terminal_reason = terminal(run.reason);
  return traj;
}

}  // namespace qlearndyn
