#include "qlearndyn/fixtures.hpp"

#include <stdexcept>

namespace qlearndyn {

std::vector<std::string> fixture_names() {
  return {"prisoners_dilemma", "matching_pennies", "stag_hunt", "hawk_dove", "battle_coordination", "fig8_game"};
}

Game fixture(const std::string& name) {
  // Action 1 (index 0) is defect; b/a = d/c = -2.
  if (name == "prisoners_dilemma") return {name, {{1, 5}, {0, 3}}, {{1, 5}, {0, 3}}};
  if (name == "matching_pennies") return {name, {{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}}};
  // Mixed NE (2/5, 2/5); (1, 1) is payoff- and risk-dominant.
  if (name == "stag_hunt") return {name, {{3, 0}, {0, 2}}, {{3, 0}, {0, 2}}};
  // Anti-coordination with mixed NE (1/3, 1/3).
  if (name == "hawk_dove") return {name, {{-2, 2}, {0, 1}}, {{-2, 2}, {0, 1}}};
  // a = c and b/a + d/c = -1; -b/a = 1/3, -d/c = 2/3, so the mixed NE is (2/3, 1/3).
  if (name == "battle_coordination") return {name, {{2, 0}, {0, 1}}, {{1, 0}, {0, 2}}};
  // b/a = 0.1, d/c = -0.8, a~ = c~ = 10.
  if (name == "fig8_game") return {name, {{11, 1}, {0, 0}}, {{2, 0}, {0, 8}}};
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace qlearndyn
