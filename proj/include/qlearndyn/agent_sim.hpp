#pragma once

// Stateless two-agent Q-learning with Boltzmann action selection.
//
// Each round both policies are frozen, `batch` joint actions are sampled,
// each agent averages the realized reward per action it played, and applies
// Q_i <- Q_i + alpha (rbar_i - Q_i) to every action it sampled at least once.
// As alpha -> 0 with large batches this tracks the two-action ODE in time
// s = alpha * round.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qlearndyn/game_model.hpp"
#include "qlearndyn/learning_dynamics.hpp"

namespace qlearndyn {

struct AgentState {
  AgentState(std::vector<double> qvals, double temp, double alpha);

  std::vector<double> qvals;
  double temp;
  double alpha;
};

struct SimConfig {
  std::uint64_t batch = 100;
  std::uint64_t rounds = 10'000;
  std::uint64_t seed = 0;
  std::uint64_t record_every = 1;
};

struct TraceSample {
  std::uint64_t round;
  StrategyPoint point;
};

struct EmpiricalTrace {
  std::vector<TraceSample> samples;
};

struct AgentRun {
  EmpiricalTrace trace;  // (x, y) from both agents' policies
  AgentState final_x;
  AgentState final_y;
};

/// Name of the pseudo-random generator driving run_two_agent.
inline constexpr const char* kGeneratorId = "mt19937_64";

std::vector<double> boltzmann_policy(const AgentState& state);

/// Moves only the chosen action's Q-value towards mean_reward.
AgentState q_update(const AgentState& state, std::size_t action, double mean_reward);

/// Samples an action index from a probability vector using one uniform draw.
std::size_t sample_action(const std::vector<double>& probs, std::mt19937_64& rng);

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
double uniform01(std::mt19937_64& rng);

/// Runs the two-agent learner. Sample 0 is the initial policy; one sample is
/// then recorded every cfg.record_every rounds and after the last round.
AgentRun run_two_agent(const Game& game, const SimConfig& cfg, const AgentState& init_x,
                       const AgentState& init_y);

/// Zero-initialised agents with the given temperatures and a shared alpha.
AgentRun run_two_agent(const Game& game, const Temperatures& temps, double alpha, const SimConfig& cfg);

}  // namespace qlearndyn
