#include "qlearndyn/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlearndyn/agent_sim.hpp"
#include "qlearndyn/bifurcation.hpp"
#include "qlearndyn/errors.hpp"
#include "qlearndyn/fixtures.hpp"
#include "qlearndyn/game_model.hpp"
#include "qlearndyn/io.hpp"
#include "qlearndyn/learning_dynamics.hpp"
#include "qlearndyn/rest_points.hpp"

namespace qlearndyn {
namespace {

struct Options {
  std::string game_path;
  std::string fixture_name;
  double tx = 1.0;
  double ty = 1.0;
  std::string out = "-";
  std::uint64_t seed = 0;

  // simulate
  double x0 = 0.9;
  double y0 = 0.1;
  double t_max = 1e4;
  int starts = 0;

  // agents
  double alpha = 0.01;
  std::uint64_t batch = 100;
  std::uint64_t rounds = 10'000;
  std::uint64_t record_every = 1;
  std::string meta;

  // sweep / critical
  std::string axis = "equal";
  double fixed = 1.0;
  double sweep_min = 0.05;
  double sweep_max = 5.0;
  int steps = 200;
  std::string svg;

  // portrait
  int grid = 5;
};

Game load_game(const Options& o) {
  if (!o.fixture_name.empty()) return fixture(o.fixture_name);
  std::ifstream in(o.game_path);
  if (!in) throw std::invalid_argument("cannot read game file '" + o.game_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return io::parse_game(ss.str());
}

// Writes to `path`, or to `fallback` for "-".
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open '" + path + "' for writing");
  body(f);
  if (!f) throw std::invalid_argument("write to '" + path + "' failed");
}

nlohmann::json classify_report(const Game& game, const Temperatures& temps) {
  nlohmann::json rep;
  rep["game"] = io::game_json(game);
  const auto nash = nash_equilibria(game);
  auto ne = nlohmann::json::array();
  for (const auto& e : nash.equilibria) ne.push_back({{"x", e.x}, {"y", e.y}, {"kind", to_string(e.kind)}});
  rep["nash_equilibria"] = ne;
  rep["continuum_degenerate"] = nash.continuum_degenerate;
  if (game.actions() != 2) return rep;

  const auto raw = raw_coefficients(game);
  rep["raw_coefficients"] = {{"a", raw.a}, {"b", raw.b}, {"c", raw.c}, {"d", raw.d}};
  const auto k = reduce(raw, temps);
  rep["temperatures"] = {{"tx", temps.tx}, {"ty", temps.ty}};
  rep["reduced_coefficients"] = {{"a", k.a}, {"b", k.b}, {"c", k.c}, {"d", k.d}};
  try {
    const auto region = classify_region(k);
    rep["region"] = {{"label", to_string(region.label)}, {"detail", region.detail}};
    if (region.boundary) rep["region"]["boundary"] = *region.boundary;
    if (region.triple_possible) rep["region"]["triple_possible"] = *region.triple_possible;
  } catch (const DegenerateGame& e) {
    rep["region"] = {{"label", "degenerate"}, {"detail", e.what()}};
  }
  try {
    const auto rd = risk_dominant_profile(game);
    rep["risk_dominant"] = rd ? nlohmann::json{{"x_action", rd->x_action + 1}, {"y_action", rd->y_action + 1}}
                              : nlohmann::json("tie");
  } catch (const NotApplicable&) {
    rep["risk_dominant"] = nullptr;
  }
  rep["pitchfork"] = to_string(classify_pitchfork(game));
  rep["rest_points"] = io::rest_points_json(solve_general(k));
  return rep;
}

void require_interior(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
}

int cmd_classify(const Options& o, std::ostream& out) {
  const Game game = load_game(o);
  const auto rep = classify_report(game, Temperatures{o.tx, o.ty});
  emit(o.out, out, [&](std::ostream& s) { s << rep.dump(2) << '\n'; });
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Game game = load_game(o);
  const auto k = reduce(game, Temperatures{o.tx, o.ty});
  IntegratorConfig cfg;
  cfg.max_time = o.t_max;
  if (o.starts <= 0) {
    require_interior(o.x0, "--x0");
    require_interior(o.y0, "--y0");
    const auto traj = integrate({o.x0, o.y0}, k, cfg);
    emit(o.out, out, [&](std::ostream& s) { io::write_trajectory_csv(s, traj); });
    return kExitOk;
  }
  std::mt19937_64 rng(o.seed);
  std::ostringstream body;
  body << "start,x0,y0,t,x,y,terminal\n";
  for (int i = 0; i < o.starts; ++i) {
    StrategyPoint p{};
    do p.x = uniform01(rng); while (p.x == 0.0);
    do p.y = uniform01(rng); while (p.y == 0.0);
    const auto traj = integrate(p, k, cfg);
    const auto& last = traj.samples.back();
    body << i << ',' << io::format_number(p.x) << ',' << io::format_number(p.y) << ',' << io::format_number(last.t)
         << ',' << io::format_number(last.point.x) << ',' << io::format_number(last.point.y) << ','
         << to_string(traj.terminal_reason) << '\n';
  }
  emit(o.out, out, [&](std::ostream& s) { s << body.str(); });
  return kExitOk;
}

int cmd_agents(const Options& o, std::ostream& out) {
  const Game game = load_game(o);
  const Temperatures temps{o.tx, o.ty};
  SimConfig cfg;
  cfg.batch = o.batch;
  cfg.rounds = o.rounds;
  cfg.seed = o.seed;
  cfg.record_every = o.record_every;
  const auto run = run_two_agent(game, temps, o.alpha, cfg);
  emit(o.out, out, [&](std::ostream& s) { io::write_trace_csv(s, run.trace); });
  std::string meta = o.meta;
  if (meta.empty() && o.out != "-" && !o.out.empty()) meta = o.out + ".json";
  if (!meta.empty()) {
    emit(meta, out, [&](std::ostream& s) { s << io::trace_metadata(cfg, temps, o.alpha).dump(2) << '\n'; });
  }
  return kExitOk;
}

int cmd_restpoints(const Options& o, std::ostream& out) {
  const Game game = load_game(o);
  const auto rest = solve_general(reduce(game, Temperatures{o.tx, o.ty}));
  emit(o.out, out, [&](std::ostream& s) { s << io::rest_points_json(rest).dump(2) << '\n'; });
  return kExitOk;
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "equal") return SweepAxis::kEqual;
  if (s == "tx") return SweepAxis::kTxAtFixedTy;
  if (s == "ty") return SweepAxis::kTyAtFixedTx;
  throw std::invalid_argument("--axis must be equal, tx or ty");
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Game game = load_game(o);
  const auto diag = sweep(game, parse_axis(o.axis), o.fixed, o.sweep_min, o.sweep_max, o.steps);
  emit(o.out, out, [&](std::ostream& s) { io::write_bifurcation_csv(s, diag); });
  if (!o.svg.empty()) {
    emit(o.svg, out, [&](std::ostream& s) { s << io::bifurcation_svg(diag, game.name); });
  }
  for (double t : diag.critical_temperatures) err << "critical_temperature " << io::format_number(t) << '\n';
  if (diag.pitchfork_kind) err << "pitchfork " << to_string(*diag.pitchfork_kind) << '\n';
  return kExitOk;
}

int cmd_critical(const Options& o, std::ostream& out, std::ostream& err) {
  const Game game = load_game(o);
  CurveOrientation orient;
  if (o.axis == "tx" || o.axis == "equal") {
    orient = CurveOrientation::kTxAtFixedTy;
  } else if (o.axis == "ty") {
    orient = CurveOrientation::kTyAtFixedTx;
  } else {
    throw std::invalid_argument("--axis must be tx or ty");
  }
  if (!(o.sweep_min > 0.0 && o.sweep_max > o.sweep_min) || o.steps < 2) {
    throw std::invalid_argument("need 0 < --t-min < --t-max and --steps >= 2");
  }
  std::vector<double> grid;
  for (int i = 0; i < o.steps; ++i) {
    grid.push_back(o.sweep_min * std::pow(o.sweep_max / o.sweep_min, static_cast<double>(i) / (o.steps - 1)));
  }
  const auto curve = critical_curve(game, orient, grid);
  emit(o.out, out, [&](std::ostream& s) { io::write_critical_csv(s, curve); });
  if (curve.closing_temperature) err << "closing_temperature " << io::format_number(*curve.closing_temperature) << '\n';
  return kExitOk;
}

int cmd_portrait(const Options& o, std::ostream& out) {
  const Game game = load_game(o);
  if (o.grid < 1) throw std::invalid_argument("--grid must be positive");
  const auto k = reduce(game, Temperatures{o.tx, o.ty});
  IntegratorConfig cfg;
  cfg.max_time = o.t_max;
  std::vector<Trajectory> trajs;
  std::ostringstream body;
  body << "start,t,x,y\n";
  for (int i = 0; i < o.grid; ++i) {
    for (int j = 0; j < o.grid; ++j) {
      const StrategyPoint p{(i + 0.5) / o.grid, (j + 0.5) / o.grid};
      trajs.push_back(integrate(p, k, cfg));
      const int id = i * o.grid + j;
      for (const auto& s : trajs.back().samples) {
        body << id << ',' << io::format_number(s.t) << ',' << io::format_number(s.point.x) << ','
             << io::format_number(s.point.y) << '\n';
      }
    }
  }
  emit(o.out, out, [&](std::ostream& s) { s << body.str(); });
  if (!o.svg.empty()) {
    const auto rest = solve_general(k);
    emit(o.svg, out, [&](std::ostream& s) { s << io::portrait_svg(trajs, rest, game.name); });
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
  auto* g = sub->add_option("--game", o.game_path, "Game JSON file")->check(CLI::ExistingFile);
  auto* f = sub->add_option("--fixture", o.fixture_name, "Built-in game")->check(CLI::IsMember(fixture_names()));
  g->excludes(f);
  sub->add_option("--tx", o.tx, "Exploration rate of X")->check(CLI::PositiveNumber);
  sub->add_option("--ty", o.ty, "Exploration rate of Y")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "Output path, - for stdout");
  sub->add_option("--seed", o.seed, "Random seed");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Boltzmann Q-learning dynamics in 2x2 games", "qlearndyn"};
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "Region, equilibria and rest points as JSON");
  auto* simulate = app.add_subcommand("simulate", "Integrate the learning ODE");
  auto* agents = app.add_subcommand("agents", "Run the stochastic two-agent learner");
  auto* restpoints = app.add_subcommand("restpoints", "Interior rest points as JSON");
  auto* sweep_cmd = app.add_subcommand("sweep", "Bifurcation diagram over temperature");
  auto* critical = app.add_subcommand("critical", "Three-rest-point window over a fixed-temperature grid");
  auto* portrait = app.add_subcommand("portrait", "Trajectories from a grid of starts");
  for (auto* sub : {classify, simulate, agents, restpoints, sweep_cmd, critical, portrait}) add_common(sub, o);

  simulate->add_option("--x0", o.x0, "Initial x");
  simulate->add_option("--y0", o.y0, "Initial y");
  simulate->add_option("--t-max", o.t_max, "Integration horizon")->check(CLI::PositiveNumber);
  simulate->add_option("--starts", o.starts, "Number of random starts (terminal points only)");

  agents->add_option("--alpha", o.alpha, "Learning rate")->check(CLI::Range(0.0, 1.0));
  agents->add_option("--batch", o.batch, "Samples per round")->check(CLI::PositiveNumber);
  agents->add_option("--rounds", o.rounds, "Rounds")->check(CLI::PositiveNumber);
  agents->add_option("--record-every", o.record_every, "Record interval")->check(CLI::PositiveNumber);
  agents->add_option("--meta", o.meta, "Metadata JSON path (default: <out>.json)");

  for (auto* sub : {sweep_cmd, critical}) {
    sub->add_option("--axis", o.axis, "equal | tx | ty");
    sub->add_option("--t-min", o.sweep_min, "Lower temperature")->check(CLI::PositiveNumber);
    sub->add_option("--t-max", o.sweep_max, "Upper temperature")->check(CLI::PositiveNumber);
    sub->add_option("--steps", o.steps, "Grid points");
  }
  sweep_cmd->add_option("--fixed", o.fixed, "Held temperature for tx/ty sweeps")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--svg", o.svg, "Also write an SVG diagram");

  portrait->add_option("--grid", o.grid, "Starts per side");
  portrait->add_option("--t-max", o.t_max, "Integration horizon")->check(CLI::PositiveNumber);
  portrait->add_option("--svg", o.svg, "Also write an SVG portrait");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    if (o.game_path.empty() && o.fixture_name.empty()) throw std::invalid_argument("one of --game or --fixture is required");
    if (sub == classify) return cmd_classify(o, out);
    if (sub == simulate) return cmd_simulate(o, out);
    if (sub == agents) return cmd_agents(o, out);
    if (sub == restpoints) return cmd_restpoints(o, out);
    if (sub == sweep_cmd) return cmd_sweep(o, out, err);
    if (sub == critical) return cmd_critical(o, out, err);
    return cmd_portrait(o, out);
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumericFailure;
  } catch (const std::logic_error& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace qlearndyn
