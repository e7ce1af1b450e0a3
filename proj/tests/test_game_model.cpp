#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qlearndyn/bifurcation.hpp"
#include "qlearndyn/errors.hpp"
#include "qlearndyn/fixtures.hpp"
#include "qlearndyn/game_model.hpp"
#include "qlearndyn/rest_points.hpp"

using namespace qlearndyn;

namespace {

Game random_game(std::mt19937_64& rng, double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return Game("random", {{u(rng), u(rng)}, {u(rng), u(rng)}}, {{u(rng), u(rng)}, {u(rng), u(rng)}});
}

// Largest gain from any deviation on a 1001-point grid of mixed strategies.
std::pair<double, double> grid_gains(const Game& g, double x, double y) {
  auto ux = [&](double xx) {
    return xx * (y * g.A(0, 0) + (1 - y) * g.A(0, 1)) + (1 - xx) * (y * g.A(1, 0) + (1 - y) * g.A(1, 1));
  };
  auto uy = [&](double yy) {
    return yy * (x * g.B(0, 0) + (1 - x) * g.B(0, 1)) + (1 - yy) * (x * g.B(1, 0) + (1 - x) * g.B(1, 1));
  };
  double gx = -INFINITY, gy = -INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    gx = std::max(gx, ux(i / 1000.0) - ux(x));
    gy = std::max(gy, uy(i / 1000.0) - uy(y));
  }
  return {gx, gy};
}

}  // namespace

TEST_CASE("reduce: matching pennies and coordination coefficients") {
  const auto mp = reduce(fixture("matching_pennies"), Temperatures::equal(1.0));
  CHECK(mp.a == 4.0);
  CHECK(mp.b == -2.0);
  CHECK(mp.c == -4.0);
  CHECK(mp.d == 2.0);

  const auto co = reduce(fixture("stag_hunt"), Temperatures::equal(1.0));
  CHECK(co.a == 5.0);
  CHECK(co.b == -2.0);
  CHECK(co.c == 5.0);
  CHECK(co.d == -2.0);
  CHECK(-co.b / co.a == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("reduce: doubling T_X halves a and b") {
  const Game g = fixture("fig8_game");
  const auto k1 = reduce(g, {1.0, 0.7});
  const auto k2 = reduce(g, {2.0, 0.7});
  CHECK(k2.a == doctest::Approx(k1.a / 2));
  CHECK(k2.b == doctest::Approx(k1.b / 2));
  CHECK(k2.c == k1.c);
  CHECK(k2.b / k2.a == doctest::Approx(k1.b / k1.a).epsilon(1e-15));
}

TEST_CASE("reduce: reconstruction and ratio invariance on random games") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lt(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Game g = random_game(rng);
    const Temperatures t{std::pow(10.0, lt(rng)), std::pow(10.0, lt(rng))};
    const auto k = reduce(g, t);
    const auto& A = g.A;
    const auto& B = g.B;
    CHECK(std::abs(k.a * t.tx + (A(1, 0) + A(0, 1) - A(0, 0) - A(1, 1))) < 1e-12 * (1 + std::abs(k.a * t.tx)));
    CHECK(std::abs(k.b * t.tx - (A(0, 1) - A(1, 1))) < 1e-12 * (1 + std::abs(k.b * t.tx)));
    CHECK(std::abs(k.c * t.ty + (B(1, 0) + B(0, 1) - B(0, 0) - B(1, 1))) < 1e-12 * (1 + std::abs(k.c * t.ty)));
    CHECK(std::abs(k.d * t.ty - (B(0, 1) - B(1, 1))) < 1e-12 * (1 + std::abs(k.d * t.ty)));
    const auto k1 = reduce(g, Temperatures::equal(1.0));
    CHECK(std::abs(k.b / k.a - k1.b / k1.a) <= 1e-12 * (1 + std::abs(k1.b / k1.a)));
    CHECK(std::abs(k.d / k.c - k1.d / k1.c) <= 1e-12 * (1 + std::abs(k1.d / k1.c)));
  }
}

TEST_CASE("reduce rejects non 2x2 games and bad temperatures") {
  const Game g3("rps", PayoffMatrix(3, std::vector<double>(9, 1.0)), PayoffMatrix(3, std::vector<double>(9, 1.0)));
  CHECK_THROWS_AS(reduce(g3, Temperatures::equal(1.0)), UnsupportedDimension);
  CHECK_THROWS_AS(Temperatures(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(PayoffMatrix(2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix(2, {1.0, NAN, 3.0, 4.0}), std::invalid_argument);
}

TEST_CASE("nash_equilibria: fixtures") {
  SUBCASE("matching pennies") {
    const auto ne = nash_equilibria(fixture("matching_pennies"));
    REQUIRE(ne.equilibria.size() == 1);
    CHECK(ne.equilibria[0].kind == EquilibriumKind::kMixed);
    CHECK(ne.equilibria[0].x == doctest::Approx(0.5));
    CHECK(ne.equilibria[0].y == doctest::Approx(0.5));
  }
  SUBCASE("coordination diag(3,2)") {
    const auto ne = nash_equilibria(fixture("stag_hunt"));
    REQUIRE(ne.equilibria.size() == 3);
    CHECK(ne.equilibria[0].x == 1.0);
    CHECK(ne.equilibria[0].y == 1.0);
    CHECK(ne.equilibria[1].x == 0.0);
    CHECK(ne.equilibria[1].y == 0.0);
    CHECK(ne.equilibria[2].x == doctest::Approx(0.4));
    CHECK(ne.equilibria[2].y == doctest::Approx(0.4));
  }
  SUBCASE("hawk-dove") {
    const auto ne = nash_equilibria(fixture("hawk_dove"));
    REQUIRE(ne.equilibria.size() == 3);
    CHECK((ne.equilibria[0].x == 1.0 && ne.equilibria[0].y == 0.0));
    CHECK((ne.equilibria[1].x == 0.0 && ne.equilibria[1].y == 1.0));
    CHECK(ne.equilibria[2].x == doctest::Approx(1.0 / 3));
    CHECK(ne.equilibria[2].y == doctest::Approx(1.0 / 3));
  }
  SUBCASE("asymmetric coordination: x* = -d/c, y* = -b/a") {
    const auto ne = nash_equilibria(fixture("battle_coordination"));
    REQUIRE(ne.equilibria.size() == 3);
    CHECK(ne.equilibria[2].x == doctest::Approx(2.0 / 3));
    CHECK(ne.equilibria[2].y == doctest::Approx(1.0 / 3));
  }
  SUBCASE("prisoner's dilemma: mutual defection only") {
    const auto ne = nash_equilibria(fixture("prisoners_dilemma"));
    REQUIRE(ne.equilibria.size() == 1);
    CHECK(ne.equilibria[0].x == 1.0);
    CHECK(ne.equilibria[0].y == 1.0);
  }
  SUBCASE("flat player is a continuum") {
    const Game g("flat", {{1, 1}, {1, 1}}, {{3, 0}, {0, 2}});
    CHECK(nash_equilibria(g).continuum_degenerate);
  }
}

TEST_CASE("nash_equilibria: brute-force best response on random games") {
  std::mt19937_64 rng(5);
  int mixed = 0;
  for (int i = 0; i < 2000; ++i) {
    const Game g = random_game(rng);
    const auto ne = nash_equilibria(g);
    REQUIRE_FALSE(ne.continuum_degenerate);
    CHECK_FALSE(ne.equilibria.empty());
    for (const auto& e : ne.equilibria) {
      const auto [gx, gy] = grid_gains(g, e.x, e.y);
      CHECK(gx <= 1e-9);
      CHECK(gy <= 1e-9);
      mixed += e.kind == EquilibriumKind::kMixed;
    }
    // Every pure profile that passes the grid check is reported.
    for (double x : {0.0, 1.0}) {
      for (double y : {0.0, 1.0}) {
        const auto [gx, gy] = grid_gains(g, x, y);
        if (gx <= 0.0 && gy <= 0.0) {
          bool found = false;
          for (const auto& e : ne.equilibria) found |= e.x == x && e.y == y;
          CHECK(found);
        }
      }
    }
  }
  CHECK(mixed > 100);
}

TEST_CASE("risk_dominant_profile") {
  const auto sh = risk_dominant_profile(fixture("stag_hunt"));
  REQUIRE(sh.has_value());
  CHECK(*sh == PureProfile{0, 0});

  const Game sym("diag11", {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
  CHECK_FALSE(risk_dominant_profile(sym).has_value());
  CHECK_FALSE(risk_dominant_profile(fixture("battle_coordination")).has_value());

  // Anti-coordination: hawk-dove pure NE are (1,2) and (2,1); symmetric tie.
  CHECK_FALSE(risk_dominant_profile(fixture("hawk_dove")).has_value());
  CHECK_THROWS_AS(risk_dominant_profile(fixture("matching_pennies")), NotApplicable);
  CHECK_THROWS_AS(risk_dominant_profile(fixture("prisoners_dilemma")), NotApplicable);

  // Swapping the diagonal payoffs moves risk dominance to (2,2).
  const Game swapped("diag23", {{2, 0}, {0, 3}}, {{2, 0}, {0, 3}});
  CHECK(*risk_dominant_profile(swapped) == PureProfile{1, 1});
}

TEST_CASE("classify_region: documented examples") {
  CHECK(classify_region(ReducedCoefficients::from_values(4, -2, -4, 2)).label == RegionLabel::kSingleRestPointOnly);
  CHECK(classify_region(ReducedCoefficients::from_values(5, -2, 5, -2)).label == RegionLabel::kMultiNETriplePossible);
  CHECK(classify_region(reduce(fixture("fig8_game"), Temperatures::equal(1.0))).label ==
        RegionLabel::kSingleNETriplePossible);
  CHECK(classify_region(reduce(fixture("hawk_dove"), Temperatures::equal(1.0))).label ==
        RegionLabel::kMultiNETriplePossible);
  // Mirrors onto d/c = -2 with -b/a = -1, far below the intercept minimum.
  const auto pd = classify_region(reduce(fixture("prisoners_dilemma"), Temperatures::equal(1.0)));
  CHECK(pd.label == RegionLabel::kNumericBoundary);
  CHECK_FALSE(pd.triple_possible.value());
  CHECK_THROWS_AS(classify_region(ReducedCoefficients::from_values(0, 1, 1, 1)), DegenerateGame);

  // d/c < -1 and -b/a slightly below 1/2 needs the numeric intercept boundary.
  const auto nb = classify_region(ReducedCoefficients::from_values(10, -1.0, 10, -15));
  CHECK(nb.label == RegionLabel::kNumericBoundary);
  REQUIRE(nb.boundary.has_value());
  CHECK(*nb.boundary == doctest::Approx(-0.00616).epsilon(0.01));
  CHECK(nb.triple_possible.value());
}

TEST_CASE("classify_region: ac < 0 never gives a multi-rest-point label") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 10000; ++i) {
    double a = u(rng), c = u(rng);
    if (a * c > 0) c = -c;
    const auto r = classify_region(ReducedCoefficients::from_values(a, u(rng), c, u(rng)));
    CHECK(r.label == RegionLabel::kSingleRestPointOnly);
  }
}

TEST_CASE("classify_region agrees with brute-force rest-point counts over temperatures") {
  // Games with a~, c~ of equal sign, ratios drawn away from region boundaries.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ratio(-2.5, 2.5);
  std::uniform_real_distribution<double> mag(1.0, 10.0);
  int checked_single = 0, checked_multi = 0;
  for (int i = 0; i < 300; ++i) {
    const double p = ratio(rng), q = ratio(rng);
    auto near = [](double v, std::initializer_list<double> lines) {
      for (double l : lines) {
        if (std::abs(v - l) < 0.03) return true;
      }
      return false;
    };
    if (near(p, {0.0, 0.5, 1.0}) || near(q, {0.0, 0.5, 1.0})) continue;
    const double sign = (i % 2) ? 1.0 : -1.0;
    const double at = sign * mag(rng), ct = sign * mag(rng);
    const auto k1 = ReducedCoefficients::from_values(at, -p * at, ct, -q * ct);
    const auto region = classify_region(k1);
    if (region.label == RegionLabel::kNumericBoundary) continue;  // covered in test_bifurcation

    // Brute force: does any (T_X, T_Y) on a grid admit three rest points?
    const Game g("g", {{at - p * at, -p * at}, {0.0, 0.0}}, {{ct - q * ct, -q * ct}, {0.0, 0.0}});
    bool triple = false;
    for (int iy = 0; iy < 40 && !triple; ++iy) {
      const double ty = std::pow(10.0, -3.0 + 5.0 * iy / 39.0);
      triple = critical_window(g, CurveOrientation::kTxAtFixedTy, ty).c_minus.has_value();
    }
    if (region.label == RegionLabel::kSingleRestPointOnly) {
      CHECK_FALSE(triple);
      ++checked_single;
    } else {
      CHECK(triple);
      ++checked_multi;
    }
  }
  CHECK(checked_single > 20);
  CHECK(checked_multi > 20);
}
