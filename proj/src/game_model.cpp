#include "qlearndyn/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "qlearndyn/bifurcation.hpp"
#include "qlearndyn/errors.hpp"

namespace qlearndyn {

PayoffMatrix::PayoffMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 2) throw std::invalid_argument("payoff matrix needs at least two actions");
  if (entries_.size() != n_ * n_) throw std::invalid_argument("payoff matrix is not square");
  for (double v : entries_) {
    if (!std::isfinite(v)) throw std::invalid_argument("payoff entries must be finite");
  }
}

namespace {

std::vector<double> flatten(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw std::invalid_argument("payoff matrix is not square");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace

PayoffMatrix::PayoffMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : PayoffMatrix(rows.size(), flatten(rows)) {}

std::vector<double> PayoffMatrix::expected_rewards(const std::vector<double>& opponent) const {
  if (opponent.size() != n_) throw std::invalid_argument("opponent strategy has wrong size");
  std::vector<double> r(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * opponent[j];
  }
  return r;
}

Game::Game(std::string name_, PayoffMatrix a, PayoffMatrix b)
    : name(std::move(name_)), A(std::move(a)), B(std::move(b)) {
  if (A.size() != B.size()) throw std::invalid_argument("payoff matrices differ in size");
}

void Game::require_two_action() const {
  if (actions() != 2) {
    throw UnsupportedDimension("analytic operations need a 2x2 game, got " +
                               std::to_string(actions()) + " actions");
  }
}

Game Game::swapped() const { return Game(name, B, A); }

Temperatures::Temperatures(double tx_, double ty_) : tx(tx_), ty(ty_) {
  if (!(tx > 0.0) || !(ty > 0.0) || !std::isfinite(tx) || !std::isfinite(ty)) {
    throw DomainError("temperatures must be positive and finite");
  }
}

ReducedCoefficients ReducedCoefficients::from_values(double a, double b, double c, double d) {
  ReducedCoefficients r;
  r.a = a;
  r.b = b;
  r.c = c;
  r.d = d;
  r.raw = {a, b, c, d};
  return r;
}

RawCoefficients raw_coefficients(const Game& game) {
  game.require_two_action();
  const auto& A = game.A;
  const auto& B = game.B;
  return {
      -(A(1, 0) + A(0, 1) - A(0, 0) - A(1, 1)),
      A(0, 1) - A(1, 1),
      -(B(1, 0) + B(0, 1) - B(0, 0) - B(1, 1)),
      B(0, 1) - B(1, 1),
  };
}

ReducedCoefficients reduce(const RawCoefficients& raw, const Temperatures& temps) {
  ReducedCoefficients r;
  r.a = raw.a / temps.tx;
  r.b = raw.b / temps.tx;
  r.c = raw.c / temps.ty;
  r.d = raw.d / temps.ty;
  r.raw = raw;
  return r;
}

ReducedCoefficients reduce(const Game& game, const Temperatures& temps) {
  return reduce(raw_coefficients(game), temps);
}

std::pair<double, double> deviation_gains(const Game& game, double x, double y) {
  game.require_two_action();
  const std::vector<double> xs{x, 1.0 - x};
  const std::vector<double> ys{y, 1.0 - y};
  const auto rx = game.A.expected_rewards(ys);
  const auto ry = game.B.expected_rewards(xs);
  const double ux = x * rx[0] + (1.0 - x) * rx[1];
  const double uy = y * ry[0] + (1.0 - y) * ry[1];
  return {std::max(rx[0], rx[1]) - ux, std::max(ry[0], ry[1]) - uy};
}

NashResult nash_equilibria(const Game& game) {
  const RawCoefficients raw = raw_coefficients(game);
  NashResult result;
  const bool x_flat = std::abs(raw.a) < kDegeneracyThreshold && std::abs(raw.b) < kDegeneracyThreshold;
  const bool y_flat = std::abs(raw.c) < kDegeneracyThreshold && std::abs(raw.d) < kDegeneracyThreshold;
  if (x_flat || y_flat) {
    result.continuum_degenerate = true;
    return result;
  }

  constexpr double kTol = 1e-12;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double x = i == 0 ? 1.0 : 0.0;
      const double y = j == 0 ? 1.0 : 0.0;
      const auto [gx, gy] = deviation_gains(game, x, y);
      if (gx <= kTol && gy <= kTol) result.equilibria.push_back({x, y, EquilibriumKind::kPure});
    }
  }

  if (std::abs(raw.a) >= kDegeneracyThreshold && std::abs(raw.c) >= kDegeneracyThreshold) {
    // X's indifference pins Y's mix and vice versa.
    const double y_star = -raw.b / raw.a;
    const double x_star = -raw.d / raw.c;
    if (x_star > 0.0 && x_star < 1.0 && y_star > 0.0 && y_star < 1.0) {
      const auto [gx, gy] = deviation_gains(game, x_star, y_star);
      if (gx <= kTol && gy <= kTol) {
        result.equilibria.push_back({x_star, y_star, EquilibriumKind::kMixed});
      }
    }
  }
  return result;
}

std::optional<PureProfile> risk_dominant_profile(const Game& game) {
  const NashResult ne = nash_equilibria(game);
  if (ne.continuum_degenerate) throw NotApplicable("risk dominance: game is degenerate");
  bool p11 = false, p22 = false, p12 = false, p21 = false;
  for (const auto& e : ne.equilibria) {
    if (e.kind != EquilibriumKind::kPure) continue;
    p11 |= e.x == 1.0 && e.y == 1.0;
    p22 |= e.x == 0.0 && e.y == 0.0;
    p12 |= e.x == 1.0 && e.y == 0.0;
    p21 |= e.x == 0.0 && e.y == 1.0;
  }

  // Anti-coordination: relabel Y's actions so the pure NE sit on the diagonal.
  bool relabel_y = false;
  if (!(p11 && p22)) {
    if (p12 && p21) {
      relabel_y = true;
    } else {
      throw NotApplicable("risk dominance: not a coordination-type game");
    }
  }
  const auto& A = game.A;
  const auto& B = game.B;
  // Column index of A is Y's action, row index of B is Y's action.
  auto a = [&](int i, int j) { return A(i, relabel_y ? 1 - j : j); };
  auto b = [&](int i, int j) { return B(relabel_y ? 1 - i : i, j); };

  // Product of unilateral deviation losses at each diagonal equilibrium.
  const double loss11 = (a(0, 0) - a(1, 0)) * (b(0, 0) - b(1, 0));
  const double loss22 = (a(1, 1) - a(0, 1)) * (b(1, 1) - b(0, 1));
  if (loss11 == loss22) return std::nullopt;
  PureProfile p = loss11 > loss22 ? PureProfile{0, 0} : PureProfile{1, 1};
  if (relabel_y) p.y_action = 1 - p.y_action;
  return p;
}

GameRegion classify_region(const ReducedCoefficients& coeffs) {
  if (std::abs(coeffs.raw.a) < kDegeneracyThreshold || std::abs(coeffs.raw.c) < kDegeneracyThreshold ||
      coeffs.a == 0.0 || coeffs.c == 0.0) {
    throw DegenerateGame("classify_region: a or c vanishes");
  }
  double p = -coeffs.b / coeffs.a;
  double q = -coeffs.d / coeffs.c;
  std::ostringstream detail;

  if (coeffs.a * coeffs.c < 0.0) {
    detail << "ac < 0: line and g(u) have opposite monotonicity";
    return {RegionLabel::kSingleRestPointOnly, detail.str(), std::nullopt, std::nullopt};
  }
  if (coeffs.a < 0.0) {
    // Relabeling X's actions maps a, c < 0 onto a, c > 0 with q -> 1 - q.
    q = 1.0 - q;
    detail << "a, c < 0 mapped to a, c > 0; ";
  }
  if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
    detail << "both ratios in the open unit box: three Nash equilibria";
    return {RegionLabel::kMultiNETriplePossible, detail.str(), std::nullopt, std::nullopt};
  }
  if (q < 0.5) {
    // Relabeling both players' actions: (p, q) -> (1 - p, 1 - q).
    p = 1.0 - p;
    q = 1.0 - q;
    detail << "mirrored through (p, q) -> (1 - p, 1 - q); ";
  }
  if (q == 0.5) {
    const auto ext = intercept_extrema(-q);
    const bool possible = (ext.min_unbounded || p > ext.min) && p < ext.max;
    detail << "-d/c = 1/2 boundary, intercept range (" << ext.min << ", " << ext.max << ")";
    return {RegionLabel::kNumericBoundary, detail.str(), ext.min, possible};
  }
  if (q < 1.0) {
    if (p < 1.0) {
      detail << "-1 < d/c < -1/2: intercept minimum unbounded, maximum 1";
      return {RegionLabel::kSingleNETriplePossible, detail.str(), std::nullopt, std::nullopt};
    }
    detail << "-1 < d/c < -1/2 with -b/a >= 1 (above intercept maximum 1)";
    return {RegionLabel::kSingleRestPointOnly, detail.str(), std::nullopt, std::nullopt};
  }
  if (p >= 0.5) {
    detail << "d/c <= -1 with -b/a >= 1/2 (above intercept maximum 1/2)";
    return {RegionLabel::kSingleRestPointOnly, detail.str(), std::nullopt, std::nullopt};
  }
  const auto ext = intercept_extrema(-q);
  detail << "d/c <= -1: multiple rest points iff " << ext.min << " < -b/a < 1/2";
  return {RegionLabel::kNumericBoundary, detail.str(), ext.min, p > ext.min};
}

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::kSingleRestPointOnly: return "SingleRestPointOnly";
    case RegionLabel::kMultiNETriplePossible: return "MultiNE_TriplePossible";
    case RegionLabel::kSingleNETriplePossible: return "SingleNE_TriplePossible";
    case RegionLabel::kNumericBoundary: return "NumericBoundary";
  }
  return "?";
}

const char* to_string(EquilibriumKind kind) {
  return kind == EquilibriumKind::kPure ? "pure" : "mixed";
}

}  // namespace qlearndyn
