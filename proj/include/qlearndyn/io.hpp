#pragma once

// CSV, JSON and SVG emitters. Numbers are written in shortest round-trip form.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlearndyn/agent_sim.hpp"
#include "qlearndyn/bifurcation.hpp"
#include "qlearndyn/game_model.hpp"
#include "qlearndyn/learning_dynamics.hpp"
#include "qlearndyn/rest_points.hpp"

namespace qlearndyn::io {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_number(double v);

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated reader (no quoting); empty fields are kept.
Csv read_csv(std::istream& in);
void write_csv(std::ostream& out, const Csv& csv);

/// Header `t,x,y`.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Header `round,x,y`.
void write_trace_csv(std::ostream& out, const EmpiricalTrace& trace);
nlohmann::json trace_metadata(const SimConfig& cfg, const Temperatures& temps, double alpha);

/// Header `T,x,y,stability,branch_id`, rows ordered by branch then temperature.
void write_bifurcation_csv(std::ostream& out, const BifurcationDiagram& diagram);

/// Header `T_fixed,Tc_minus,Tc_plus`; no window gives empty fields.
void write_critical_csv(std::ostream& out, const CriticalCurve& curve);

nlohmann::json rest_points_json(const std::vector<RestPoint>& rest);

/// Parses {"name": ..., "A": [[..],[..]], "B": [[..],[..]]}. Throws
/// std::invalid_argument on malformed input.
Game parse_game(const std::string& text);
nlohmann::json game_json(const Game& game);

/// Phase portrait on the unit square: trajectories as polylines, rest points
/// as filled (stable) or open (unstable) circles.
std::string portrait_svg(const std::vector<Trajectory>& trajectories, const std::vector<RestPoint>& rest,
                         const std::string& title);

/// x against temperature (log axis) for each branch.
std::string bifurcation_svg(const BifurcationDiagram& diagram, const std::string& title);

}  // namespace qlearndyn::io
