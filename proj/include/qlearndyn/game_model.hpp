#pragma once

// Two-player matrix games and the reduced (a, b, c, d) parametrisation of the
// two-action learning dynamics.
//
// Payoff convention: for BOTH matrices the row index is the owner's own action
// and the column index is the opponent's action. So A(i, j) is X's reward when
// X plays i and Y plays j, and B(i, j) is Y's reward when Y plays i and X
// plays j. B is therefore not the transpose used in the usual bimatrix
// notation.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace qlearndyn {

/// Square payoff matrix, row-major. n >= 2, all entries finite.
class PayoffMatrix {
 public:
  PayoffMatrix(std::size_t n, std::vector<double> entries);
  PayoffMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t own, std::size_t opp) const { return entries_[own * n_ + opp]; }
  const std::vector<double>& entries() const { return entries_; }

  /// Expected reward of each own action against a mixed opponent strategy.
  std::vector<double> expected_rewards(const std::vector<double>& opponent) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

struct Game {
  Game(std::string name, PayoffMatrix a, PayoffMatrix b);

  std::string name;
  PayoffMatrix A;  // player X
  PayoffMatrix B;  // player Y

  std::size_t actions() const { return A.size(); }
  /// Throws UnsupportedDimension unless the game is 2x2.
  void require_two_action() const;
  /// Same game with the players' roles exchanged.
  Game swapped() const;
};

/// Exploration rates. Both strictly positive.
struct Temperatures {
  Temperatures(double tx, double ty);
  static Temperatures equal(double t) { return {t, t}; }

  double tx;
  double ty;
};

/// Temperature-free payoff combinations of a 2x2 game.
struct RawCoefficients {
  double a;  // a11 + a22 - a12 - a21
  double b;  // a12 - a22
  double c;  // b11 + b22 - b12 - b21
  double d;  // b12 - b22
};

/// a = a~/T_X, b = b~/T_X, c = c~/T_Y, d = d~/T_Y.
struct ReducedCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  RawCoefficients raw{};

  /// Builds coefficients directly (raw numerators taken at T_X = T_Y = 1).
  static ReducedCoefficients from_values(double a, double b, double c, double d);
};

/// Below this magnitude a~ or c~ is treated as exactly zero.
inline constexpr double kDegeneracyThreshold = 1e-12;

RawCoefficients raw_coefficients(const Game& game);
ReducedCoefficients reduce(const Game& game, const Temperatures& temps);
ReducedCoefficients reduce(const RawCoefficients& raw, const Temperatures& temps);

enum class EquilibriumKind { kPure, kMixed };

struct NashEquilibrium {
  double x;  // X's probability of action 1
  double y;  // Y's probability of action 1
  EquilibriumKind kind;
};

struct NashResult {
  std::vector<NashEquilibrium> equilibria;
  /// A player is indifferent between its actions against every opponent
  /// strategy, so equilibria form a continuum and no list is given.
  bool continuum_degenerate = false;
};

/// All pure NE (by best-response enumeration) plus the interior mixed NE at
/// (x*, y*) = (-d/c, -b/a) when both ratios lie strictly inside (0, 1).
NashResult nash_equilibria(const Game& game);

/// Gain available to the best unilateral pure deviation from (x, y), per player.
std::pair<double, double> deviation_gains(const Game& game, double x, double y);

struct PureProfile {
  int x_action;  // 0 or 1
  int y_action;  // 0 or 1
  bool operator==(const PureProfile&) const = default;
};

/// Strictly risk-dominant pure NE of a coordination-type game (two pure NE on
/// the diagonal, possibly after relabeling Y's actions). Returns nullopt on a
/// tie. Throws NotApplicable for other games.
std::optional<PureProfile> risk_dominant_profile(const Game& game);

enum class RegionLabel {
  kSingleRestPointOnly,
  kMultiNETriplePossible,
  kSingleNETriplePossible,
  kNumericBoundary,
};

struct GameRegion {
  RegionLabel label;
  std::string detail;
  /// For kNumericBoundary: the numerically computed intercept boundary and
  /// whether the game lies on the multi-rest-point side of it.
  std::optional<double> boundary;
  std::optional<bool> triple_possible;
};

GameRegion classify_region(const ReducedCoefficients& coeffs);

const char* to_string(RegionLabel label);
const char* to_string(EquilibriumKind kind);

}  // namespace qlearndyn
