#include "qlearndyn/agent_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlearndyn/errors.hpp"

namespace qlearndyn {

AgentState::AgentState(std::vector<double> q, double t, double a) : qvals(std::move(q)), temp(t), alpha(a) {
  if (qvals.empty()) throw std::invalid_argument("agent needs at least one action");
  for (double v : qvals) {
    if (!std::isfinite(v)) throw std::invalid_argument("Q-values must be finite");
  }
  if (!(temp > 0.0)) throw DomainError("agent temperature must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("learning rate must lie in [0, 1]");
}

std::vector<double> boltzmann_policy(const AgentState& state) { return gibbs_steady_state(state.qvals, state.temp); }

AgentState q_update(const AgentState& state, std::size_t action, double mean_reward) {
  if (action >= state.qvals.size()) throw std::out_of_range("action index out of range");
  AgentState next = state;
  next.qvals[action] += state.alpha * (mean_reward - state.qvals[action]);
  return next;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_action(const std::vector<double>& probs, std::mt19937_64& rng) {
  const double r = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return i;
  }
  return probs.size() - 1;
}

AgentRun run_two_agent(const Game& game, const SimConfig& cfg, const AgentState& init_x,
                       const AgentState& init_y) {
  const std::size_t n = game.actions();
  if (init_x.qvals.size() != n || init_y.qvals.size() != n) {
    throw std::invalid_argument("agent Q vectors do not match the game");
  }
  if (cfg.batch < 1 || cfg.rounds < 1 || cfg.record_every < 1) {
    throw std::invalid_argument("batch, rounds and record_every must be positive");
  }

  std::mt19937_64 rng(cfg.seed);
  AgentState ax = init_x;
  AgentState ay = init_y;
  EmpiricalTrace trace;
  auto record = [&](std::uint64_t round, const std::vector<double>& px, const std::vector<double>& py) {
    trace.samples.push_back({round, {px[0], py[0]}});
  };

  std::vector<double> sum_x(n), sum_y(n);
  std::vector<std::uint64_t> cnt_x(n), cnt_y(n);
  auto px = boltzmann_policy(ax);
  auto py = boltzmann_policy(ay);
  record(0, px, py);

  for (std::uint64_t round = 1; round <= cfg.rounds; ++round) {
    std::fill(sum_x.begin(), sum_x.end(), 0.0);
    std::fill(sum_y.begin(), sum_y.end(), 0.0);
    std::fill(cnt_x.begin(), cnt_x.end(), 0);
    std::fill(cnt_y.begin(), cnt_y.end(), 0);
    for (std::uint64_t s = 0; s < cfg.batch; ++s) {
      const std::size_t i = sample_action(px, rng);
      const std::size_t j = sample_action(py, rng);
      sum_x[i] += game.A(i, j);
      ++cnt_x[i];
      sum_y[j] += game.B(j, i);
      ++cnt_y[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (cnt_x[i] > 0) ax.qvals[i] += ax.alpha * (sum_x[i] / static_cast<double>(cnt_x[i]) - ax.qvals[i]);
      if (cnt_y[i] > 0) ay.qvals[i] += ay.alpha * (sum_y[i] / static_cast<double>(cnt_y[i]) - ay.qvals[i]);
    }
    px = boltzmann_policy(ax);
    py = boltzmann_policy(ay);
    if (round % cfg.record_every == 0 || round == cfg.rounds) record(round, px, py);
  }
  return {std::move(trace), std::move(ax), std::move(ay)};
}

AgentRun run_two_agent(const Game& game, const Temperatures& temps, double alpha, const SimConfig& cfg) {
  const std::size_t n = game.actions();
  return run_two_agent(game, cfg, AgentState(std::vector<double>(n, 0.0), temps.tx, alpha),
                       AgentState(std::vector<double>(n, 0.0), temps.ty, alpha));
}

}  // namespace qlearndyn
