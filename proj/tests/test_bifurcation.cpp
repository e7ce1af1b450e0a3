#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qlearndyn/bifurcation.hpp"
#include "qlearndyn/errors.hpp"
#include "qlearndyn/fixtures.hpp"

using namespace qlearndyn;

namespace {

// 2x2 game with the given reduced numerators: a11 = a + b, a12 = b, a21 = a22 = 0.
Game from_raw(double a, double b, double c, double d) {
  return Game("raw", {{a + b, b}, {0, 0}}, {{c + d, d}, {0, 0}});
}

void check_continuity(const BifurcationDiagram& d) {
  for (const auto& br : d.branches) {
    for (std::size_t i = 1; i < br.samples.size(); ++i) {
      const auto& p = br.samples[i - 1].rest.point;
      const auto& q = br.samples[i].rest.point;
      CHECK(std::hypot(p.x - q.x, p.y - q.y) < kBranchContinuity);
      CHECK(br.samples[i].temperature > br.samples[i - 1].temperature);
    }
  }
}

StrategyPoint profile_point(const PureProfile& p) {
  return {p.x_action == 0 ? 1.0 : 0.0, p.y_action == 0 ? 1.0 : 0.0};
}

double dist(const StrategyPoint& p, const StrategyPoint& q) { return std::hypot(p.x - q.x, p.y - q.y); }

}  // namespace

TEST_CASE("classify_pitchfork on fixtures") {
  CHECK(classify_pitchfork(fixture("stag_hunt")) == PitchforkKind::kDiscontinuous);
  CHECK(classify_pitchfork(fixture("battle_coordination")) == PitchforkKind::kContinuous);
  CHECK(classify_pitchfork(fixture("hawk_dove")) == PitchforkKind::kContinuous);
  CHECK(classify_pitchfork(fixture("matching_pennies")) == PitchforkKind::kNone);
  CHECK(classify_pitchfork(fixture("prisoners_dilemma")) == PitchforkKind::kNone);
  CHECK(classify_pitchfork(from_raw(2, -1, 2, -1)) == PitchforkKind::kContinuous);
  CHECK(classify_pitchfork(from_raw(2, -1, 3, -1.5)) == PitchforkKind::kDiscontinuous);
  CHECK(classify_pitchfork(from_raw(-2, 1, -2, 0.5)) == PitchforkKind::kDiscontinuous);
}

TEST_CASE("sweep_equal_T: fixtures") {
  SUBCASE("stag hunt: discontinuous, survivor at the risk-dominant corner") {
    const auto d = sweep_equal_T(fixture("stag_hunt"), 0.05, 5.0, 200);
    REQUIRE(d.critical_temperatures.size() == 1);
    CHECK(d.critical_temperatures[0] == doctest::Approx(0.72553602).epsilon(1e-7));
    REQUIRE(d.pitchfork_kind.has_value());
    CHECK(*d.pitchfork_kind == PitchforkKind::kDiscontinuous);
    REQUIRE(d.evidence.has_value());
    CHECK(d.evidence->max_separation == doctest::Approx(1.145).epsilon(1e-3));
    CHECK(d.evidence->survivor.x == doctest::Approx(0.982).epsilon(1e-3));
    CHECK(d.evidence->survivor.y == doctest::Approx(0.982).epsilon(1e-3));
    CHECK(d.branches.size() == 3);
    check_continuity(d);
  }
  SUBCASE("continuous pitchforks") {
    for (const char* name : {"battle_coordination", "hawk_dove"}) {
      const auto d = sweep_equal_T(fixture(name), 0.05, 5.0, 200);
      REQUIRE(d.critical_temperatures.size() == 1);
      CHECK(d.critical_temperatures[0] == doctest::Approx(0.72876548).epsilon(1e-7));
      REQUIRE(d.pitchfork_kind.has_value());
      CHECK(*d.pitchfork_kind == PitchforkKind::kContinuous);
      CHECK(d.evidence->max_separation < kBranchContinuity);
      CHECK(d.branches.size() == 3);
      check_continuity(d);
    }
  }
  SUBCASE("matching pennies: a single flat branch") {
    const auto d = sweep_equal_T(fixture("matching_pennies"), 0.05, 50.0, 100);
    CHECK(d.critical_temperatures.empty());
    CHECK_FALSE(d.evidence.has_value());
    REQUIRE(d.branches.size() == 1);
    for (const auto& s : d.branches[0].samples) {
      CHECK(std::abs(s.rest.point.x - 0.5) < 1e-9);
      CHECK(std::abs(s.rest.point.y - 0.5) < 1e-9);
      CHECK(s.rest.stability == Stability::kStableSpiral);
    }
  }
  SUBCASE("prisoner's dilemma: one branch, no critical point") {
    const auto d = sweep_equal_T(fixture("prisoners_dilemma"), 0.05, 20.0, 100);
    CHECK(d.critical_temperatures.empty());
    CHECK(d.branches.size() == 1);
    check_continuity(d);
  }
  CHECK_THROWS_AS(sweep_equal_T(fixture("stag_hunt"), 0.0, 1.0, 10), DomainError);
}

TEST_CASE("numerical pitchfork evidence agrees with classify_pitchfork") {
  std::mt19937_64 rng(21);
  // T_c grows with |a~|; the fixed 1e-4 offset is only small relative to T_c of order one.
  std::uniform_real_distribution<double> mag(2, 6), ratio(0.1, 0.9), sgn(0, 1);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const double a = (sgn(rng) < 0.5 ? -1 : 1) * mag(rng);
    const double p = ratio(rng);
    double c = (a > 0 ? 1 : -1) * mag(rng), q = ratio(rng);
    // Every third game sits on the continuous family.
    if (i % 3 == 0) {
      c = a;
      q = a > 0 ? 1 - p : p;
    }
    const Game g = from_raw(a, -p * a, c, -q * c);
    const auto kind = classify_pitchfork(g);
    REQUIRE(kind != PitchforkKind::kNone);
    // Stay clear of near-continuous games where the numeric split is ambiguous.
    if (kind == PitchforkKind::kDiscontinuous && std::abs(p - (a > 0 ? 1 - q : q)) < 0.1) continue;
    const double tc_scale = std::sqrt(std::abs(a * c));
    const auto ev = pitchfork_evidence(g, 1e-3 * tc_scale, tc_scale);
    REQUIRE(ev.has_value());
    ++checked;
    if (kind == PitchforkKind::kContinuous) {
      CHECK(ev->max_separation < kBranchContinuity);
    } else {
      CHECK(ev->vanishing_to_survivor > 0.1);
      // The surviving rest point sits next to the risk-dominant equilibrium.
      const auto rd = risk_dominant_profile(g);
      if (a > 0 && rd.has_value()) {
        const StrategyPoint near = profile_point(*rd);
        const StrategyPoint far{1 - near.x, 1 - near.y};
        CHECK(dist(ev->survivor, near) < dist(ev->survivor, far));
      }
    }
  }
  CHECK(checked >= 30);
}

TEST_CASE("sweep along one axis matches critical_window edges") {
  const Game g = fixture("fig8_game");
  for (double ty : {0.01, 0.1, 0.5}) {
    const auto w = critical_window(g, CurveOrientation::kTxAtFixedTy, ty);
    REQUIRE(w.c_minus.has_value());
    REQUIRE(w.c_plus.has_value());
    const auto d = sweep(g, SweepAxis::kTxAtFixedTy, ty, 0.05, 20.0, 200);
    REQUIRE(d.critical_temperatures.size() == 2);
    CHECK(d.critical_temperatures[0] == doctest::Approx(*w.c_minus).epsilon(1e-8));
    CHECK(d.critical_temperatures[1] == doctest::Approx(*w.c_plus).epsilon(1e-8));
    check_continuity(d);
  }
}

TEST_CASE("critical_window: count law on dense grids") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-6, 6), mag(1, 12), ratio(-1.1, 0.1), lt(-2, 0.5);
  int windows = 0;
  for (int i = 0; i < 120; ++i) {
    Game g = from_raw(u(rng), u(rng), u(rng), u(rng));
    if (i % 2 == 0) {
      const double a = mag(rng), c = (i % 4 == 0 ? 1 : -1) * mag(rng);
      g = from_raw(a, ratio(rng) * a, c, ratio(rng) * c);
    }
    const auto raw = raw_coefficients(g);
    const double ty = std::pow(10.0, lt(rng));
    const auto w = critical_window(g, CurveOrientation::kTxAtFixedTy, ty);
    if (w.gap) continue;
    windows += w.c_minus.has_value() || w.c_plus.has_value();
    for (int j = 0; j < 100; ++j) {
      const double tx = std::pow(10.0, -3 + 5.0 * j / 99);
      auto near = [&](const std::optional<double>& e) { return e && std::abs(tx - *e) < 1e-6 * *e; };
      if (near(w.c_minus) || near(w.c_plus)) continue;
      const bool inside = (w.c_minus || w.c_plus) && tx > w.c_minus.value_or(0.0) &&
                          (!w.c_plus || tx < *w.c_plus);
      const int n = count_rest_points(reduce(raw, {tx, ty}));
      CHECK((n == 3) == inside);
    }
  }
  CHECK(windows > 10);
}

TEST_CASE("critical_window: fig8 fixture and its low-temperature limits") {
  const Game g = fixture("fig8_game");
  const auto lim = low_temperature_window_limits(0.1, -0.8, 10);
  CHECK(lim.u_tilde == doctest::Approx(1.386294361119891).epsilon(1e-14));
  CHECK(lim.tx_c_minus == doctest::Approx(0.7213475204444817).epsilon(1e-14));
  CHECK(lim.tx_c_plus == doctest::Approx(7.934822724889298).epsilon(1e-14));

  const auto w = critical_window(g, CurveOrientation::kTxAtFixedTy, 1e-3);
  REQUIRE(w.c_minus.has_value());
  REQUIRE(w.c_plus.has_value());
  CHECK(*w.c_minus == doctest::Approx(0.724937208420093).epsilon(1e-9));
  CHECK(*w.c_plus == doctest::Approx(7.9040933950522).epsilon(1e-9));
  CHECK(std::abs(*w.c_minus / lim.tx_c_minus - 1) < 0.01);
  CHECK(std::abs(*w.c_plus / lim.tx_c_plus - 1) < 0.01);
  CHECK(w.residual < 1e-10);

  CHECK_FALSE(critical_window(g, CurveOrientation::kTxAtFixedTy, 1.02).c_minus.has_value());

  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(std::pow(10.0, -3 + 3.3 * i / 30));
  const auto curve = critical_curve(g, CurveOrientation::kTxAtFixedTy, grid);
  REQUIRE(curve.closing_temperature.has_value());
  CHECK(*curve.closing_temperature == doctest::Approx(1.012731791).epsilon(2e-6));
  for (const auto& s : curve.samples) CHECK_FALSE(s.gap);
}

TEST_CASE("low_temperature_window_limits: domain") {
  // Relabeling both players' actions.
  const auto m = low_temperature_window_limits(-1.1, -0.2, 10);
  CHECK(m.tx_c_minus == doctest::Approx(0.7213475204444817).epsilon(1e-12));
  CHECK(m.tx_c_plus == doctest::Approx(7.934822724889298).epsilon(1e-12));
  CHECK_THROWS_AS(low_temperature_window_limits(0.1, -0.5, 10), NotApplicable);
  CHECK_THROWS_AS(low_temperature_window_limits(0.1, -1.0, 10), NotApplicable);
  CHECK_THROWS_AS(low_temperature_window_limits(0.1, -0.8, -10), NotApplicable);
  CHECK_THROWS_AS(low_temperature_window_limits(0.1, 0.3, 10), NotApplicable);
}

TEST_CASE("cusp_locate") {
  const auto cusp = cusp_locate();
  CHECK(std::abs(cusp.a - 4.0) < 1e-6);
  CHECK(std::abs(cusp.b + 2.0) < 1e-6);
}

TEST_CASE("delta_extrema") {
  // d = -c/2: g is point-symmetric about u = 0, which is its inflection.
  const auto sym = delta_extrema(6, -3, 1, 1, 1);
  REQUIRE(sym.samples.size() == 1);
  CHECK(std::abs(sym.samples[0].u_inflection) < 1e-12);
  CHECK(std::abs(g_eval({6, -3}, 0).g2) < 1e-15);
  CHECK(sym.samples[0].delta_at_zero == doctest::Approx(0.5).epsilon(1e-15));

  const auto prof = delta_extrema(10, -8, 1e-3, 10, 50);
  CHECK(prof.samples.size() == 50);
  CHECK(prof.min_unbounded);
  CHECK_FALSE(prof.max_unbounded);
  CHECK(prof.delta_min <= prof.delta_max);
  // Mirror image for c < 0.
  const auto neg = delta_extrema(-10, 2, 1e-3, 10, 50);
  CHECK(neg.min_unbounded);
  CHECK_FALSE(neg.max_unbounded);
  CHECK_THROWS_AS(delta_extrema(0, 1, 1, 2, 3), DomainError);

  CHECK(intercept_extrema(-1.2).min == doctest::Approx(-0.0426151).epsilon(1e-5));
  CHECK(intercept_extrema(-1.5).min == doctest::Approx(-0.00616157).epsilon(1e-5));
  CHECK(intercept_extrema(-2.0).min == doctest::Approx(-0.000385083).epsilon(1e-5));
  CHECK(intercept_extrema(-3.0).min == doctest::Approx(-2.34841e-6).epsilon(1e-4));
  const auto e = intercept_extrema(-0.8);
  CHECK(e.min_unbounded);
  CHECK(std::isinf(e.min));
  CHECK(e.max == doctest::Approx(1.0).epsilon(1e-9));
  const auto f = intercept_extrema(-0.3);
  CHECK(f.max_unbounded);
  CHECK_FALSE(f.min_unbounded);
}

TEST_CASE("intercept extrema bound every sampled intercept") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> r(-3, 2), uu(-30, 30), lc(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const double q = r(rng);
    const auto e = intercept_extrema(q);
    for (int j = 0; j < 50; ++j) {
      const double c = std::pow(10.0, lc(rng));
      const double delta = tangent_intercept({c, q * c}, uu(rng));
      CHECK(delta >= e.min - 1e-9);
      CHECK(delta <= e.max + 1e-9);
    }
  }
}
