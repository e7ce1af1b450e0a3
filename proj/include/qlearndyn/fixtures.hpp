#pragma once

// Built-in 2x2 games. Payoffs use the own-action-first convention of Game.

#include <string>
#include <vector>

#include "qlearndyn/game_model.hpp"

namespace qlearndyn {

/// prisoners_dilemma, matching_pennies, stag_hunt, hawk_dove,
/// battle_coordination, fig8_game.
std::vector<std::string> fixture_names();

/// Throws std::invalid_argument for an unknown name.
Game fixture(const std::string& name);

}  // namespace qlearndyn
