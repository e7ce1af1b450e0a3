#include "qlearndyn/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlearndyn/errors.hpp"
#include "qlearndyn/roots.hpp"

namespace qlearndyn {

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kEqual: return "T_equal";
    case SweepAxis::kTxAtFixedTy: return "T_X_at_fixed_T_Y";
    case SweepAxis::kTyAtFixedTx: return "T_Y_at_fixed_T_X";
  }
  return "?";
}

const char* to_string(PitchforkKind kind) {
  switch (kind) {
    case PitchforkKind::kNone: return "none";
    case PitchforkKind::kContinuous: return "continuous";
    case PitchforkKind::kDiscontinuous: return "discontinuous";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance(const StrategyPoint& p, const StrategyPoint& q) { return std::hypot(p.x - q.x, p.y - q.y); }

std::vector<double> log_grid(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps <= 1) return {lo};
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1)));
  out.back() = hi;
  return out;
}

Temperatures temps_on_axis(SweepAxis axis, double t, double fixed) {
  switch (axis) {
    case SweepAxis::kTxAtFixedTy: return {t, fixed};
    case SweepAxis::kTyAtFixedTx: return {fixed, t};
    case SweepAxis::kEqual: break;
  }
  return Temperatures::equal(t);
}

// Bisects a change in the integer count between lo and hi (log scale), to
// 1e-12 relative. Returns the bracket.
template <class Count>
std::pair<double, double> bisect_count(Count&& count, double lo, double hi, int n_lo) {
  while (hi - lo > 1e-12 * hi) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    (count(mid) == n_lo ? lo : hi) = mid;
  }
  return {lo, hi};
}

struct Transition {
  double t;  // midpoint of the final bracket
  double lo;
  double hi;
  int n_lo;
  int n_hi;
};

template <class Count>
std::vector<Transition> count_transitions(Count&& count, const std::vector<double>& grid) {
  std::vector<Transition> out;
  int prev = count(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const int n = count(grid[i]);
    if (n != prev) {
      const auto [lo, hi] = bisect_count(count, grid[i - 1], grid[i], prev);
      out.push_back({std::sqrt(lo * hi), lo, hi, prev, n});
    }
    prev = n;
  }
  return out;
}

struct Column {
  double t;
  std::vector<RestPoint> rest;
};

// Largest (x, y) step when two columns with equal counts are matched in u order.
double ordered_step(const Column& a, const Column& b) {
  if (a.rest.size() != b.rest.size()) return kInf;
  double m = 0.0;
  for (std::size_t i = 0; i < a.rest.size(); ++i) m = std::max(m, distance(a.rest[i].point, b.rest[i].point));
  return m;
}

// Inserts geometric midpoints between `a` and `b` (exclusive) until every
// equal-count step moves less than half the continuity threshold.
template <class Coeffs>
void refine_between(std::vector<Column>& out, Column a, Column b, Coeffs&& coeffs, int depth) {
  if (depth >= 24 || a.rest.size() != b.rest.size() || ordered_step(a, b) < 0.5 * kBranchContinuity) return;
  const double tm = std::sqrt(a.t * b.t);
  if (!(tm > a.t && tm < b.t)) return;
  Column mid{tm, solve_general(coeffs(tm))};
  refine_between(out, a, mid, coeffs, depth + 1);
  out.push_back(mid);
  refine_between(out, std::move(mid), std::move(b), coeffs, depth + 1);
}

// Nearest-neighbour continuation of the rest points across columns: in u
// order when the count is unchanged, greedy otherwise.
std::vector<Branch> stitch(const std::vector<Column>& columns) {
  std::vector<Branch> branches;
  std::vector<std::size_t> active;
  for (const auto& col : columns) {
    struct Pair {
      double dist;
      std::size_t branch;
      std::size_t point;
    };
    std::vector<Pair> pairs;
    if (active.size() == col.rest.size()) {
      bool ordered = true;
      for (std::size_t p = 0; p < col.rest.size() && ordered; ++p) {
        const auto& last = branches[active[p]].samples.back().rest;
        ordered = distance(last.point, col.rest[p].point) < kBranchContinuity;
      }
      if (ordered) {
        for (std::size_t p = 0; p < col.rest.size(); ++p) branches[active[p]].samples.push_back({col.t, col.rest[p]});
        continue;
      }
    }
    for (std::size_t b : active) {
      for (std::size_t p = 0; p < col.rest.size(); ++p) {
        const double d = distance(branches[b].samples.back().rest.point, col.rest[p].point);
        if (d < kBranchContinuity) pairs.push_back({d, b, p});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dist < y.dist; });
    std::vector<bool> used_branch(branches.size(), false);
    std::vector<bool> used_point(col.rest.size(), false);
    std::vector<std::size_t> next_active;
    for (const auto& pr : pairs) {
      if (used_branch[pr.branch] || used_point[pr.point]) continue;
      used_branch[pr.branch] = used_point[pr.point] = true;
      branches[pr.branch].samples.push_back({col.t, col.rest[pr.point]});
      next_active.push_back(pr.branch);
    }
    for (std::size_t p = 0; p < col.rest.size(); ++p) {
      if (used_point[p]) continue;
      branches.push_back({static_cast<int>(branches.size()), {{col.t, col.rest[p]}}});
      next_active.push_back(branches.size() - 1);
    }
    active = std::move(next_active);
  }
  return branches;
}

std::optional<PitchforkEvidence> evidence_at(const Game& game, double tc) {
  const RawCoefficients raw = raw_coefficients(game);
  const double below = tc - kPitchforkOffset;
  if (!(below > 0.0)) return std::nullopt;
  const auto three = solve_general(reduce(raw, Temperatures::equal(below)));
  const auto one = solve_general(reduce(raw, Temperatures::equal(tc + kPitchforkOffset)));
  if (three.size() != 3 || one.size() != 1) return std::nullopt;

  PitchforkEvidence ev{};
  ev.critical_temperature = tc;
  ev.survivor = one.front().point;
  ev.max_separation = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      ev.max_separation = std::max(ev.max_separation, distance(three[i].point, three[j].point));
    }
  }
  // The sub-critical point nearest the survivor continues it; the other two vanish.
  std::size_t cont = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (distance(three[i].point, ev.survivor) < distance(three[cont].point, ev.survivor)) cont = i;
  }
  ev.vanishing_to_survivor = kInf;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i != cont) ev.vanishing_to_survivor = std::min(ev.vanishing_to_survivor, distance(three[i].point, ev.survivor));
  }
  return ev;
}

std::optional<PitchforkKind> kind_from_evidence(const PitchforkEvidence& ev) {
  if (ev.max_separation < kBranchContinuity) return PitchforkKind::kContinuous;
  if (ev.vanishing_to_survivor > 0.1) return PitchforkKind::kDiscontinuous;
  return std::nullopt;
}

// sup/inf of delta over u for one (c, d): attained at u = 0 or the inflection
// point, or approached at u -> -inf (s(d)) or +inf (s(d + c)).
std::pair<double, double> delta_range(const GFunction& gf, double* u0_out = nullptr,
                                      double* at_u0 = nullptr, double* at_zero = nullptr) {
  const double u0 = g_inflection(gf);
  const double d0 = tangent_intercept(gf, 0.0);
  const double du0 = tangent_intercept(gf, u0);
  const double left = logistic(gf.d);
  const double right = logistic(gf.d + gf.c);
  if (u0_out) *u0_out = u0;
  if (at_u0) *at_u0 = du0;
  if (at_zero) *at_zero = d0;
  return {std::min({d0, du0, left, right}), std::max({d0, du0, left, right})};
}

// Unbounded flags for c > 0 and ratio r = d/c.
std::pair<bool, bool> unbounded_flags(double r) { return {r > -1.0 && r < -0.5, r > -0.5 && r < 0.0}; }

// Tangency points u of the line u/a - b/a with g, i.e. delta(u) = -b/a.
// delta is monotone between -inf, min(0, u0), max(0, u0), +inf.
std::vector<double> tangency_us(const GFunction& gf, double target) {
  const double u0 = g_inflection(gf);
  std::vector<double> cuts{std::min(0.0, u0), std::max(0.0, u0)};
  if (cuts[0] == cuts[1]) cuts.pop_back();
  auto f = [&](double u) { return tangent_intercept(gf, u) - target; };

  std::vector<double> out;
  auto add_root = [&](double lo, double hi) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
      out.push_back(lo);
      return;
    }
    if (fhi == 0.0) return;  // picked up as the next piece's lower end
    if (roots::sign_of(flo) == roots::sign_of(fhi)) return;
    out.push_back(roots::bisect(f, lo, hi, flo));
  };
  // Outer pieces extend until delta has reached its asymptote.
  auto far_end = [&](double from, double dir) {
    double step = 1.0;
    double u = from + dir * step;
    const double asym = dir < 0 ? logistic(gf.d) : logistic(gf.d + gf.c);
    while (std::abs(u) < 1e3) {
      const double fu = f(u);
      if (roots::sign_of(fu) != roots::sign_of(f(from)) || std::abs(tangent_intercept(gf, u) - asym) == 0.0) break;
      step *= 2.0;
      u = from + dir * step;
    }
    return u;
  };
  add_root(far_end(cuts.front(), -1.0), cuts.front());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) add_root(cuts[i], cuts[i + 1]);
  // Right piece: exclude a zero exactly at the cut, already reported.
  {
    const double lo = cuts.back();
    const double hi = far_end(lo, 1.0);
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
      out.push_back(lo);
    } else if (fhi != 0.0 && roots::sign_of(flo) != roots::sign_of(fhi)) {
      out.push_back(roots::bisect(f, lo, hi, flo));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Window of T_X with three rest points when (c~, d~) are scaled by a fixed T_Y.
CriticalSample window_tx(const RawCoefficients& raw, double ty) {
  CriticalSample s;
  s.t_fixed = ty;
  if (std::abs(raw.a) < kDegeneracyThreshold || std::abs(raw.c) < kDegeneracyThreshold) return s;
  const GFunction gf{raw.c / ty, raw.d / ty};
  if (!std::isfinite(gf.c) || !std::isfinite(gf.d)) {
    s.gap = true;
    return s;
  }
  for (double u : tangency_us(gf, -raw.b / raw.a)) {
    const auto gv = g_eval(gf, u);
    const double tx = raw.a * gv.g1;
    if (!(tx > 0.0) || !std::isfinite(tx)) continue;
    s.tangencies.push_back(tx);
    const double scale = 1.0 + std::abs(raw.a) + std::abs(raw.b);
    s.residual = std::max({s.residual, std::abs(tx * u - raw.b - raw.a * gv.g) / scale});
  }
  std::sort(s.tangencies.begin(), s.tangencies.end());
  if (s.tangencies.empty()) return s;

  auto count = [&](double tx) { return count_rest_points(reduce(raw, Temperatures{tx, ty})); };
  const auto& tg = s.tangencies;
  for (std::size_t i = 0; i <= tg.size(); ++i) {
    const double lo = i == 0 ? 0.0 : tg[i - 1];
    const double hi = i == tg.size() ? kInf : tg[i];
    const double probe = i == 0 ? 0.5 * hi : (i == tg.size() ? 2.0 * lo : std::sqrt(lo * hi));
    if (count(probe) != 3) continue;
    if (!s.c_minus) s.c_minus = lo;
    s.c_plus = hi == kInf ? std::optional<double>{} : std::optional<double>{hi};
  }
  if (s.c_minus && !s.c_plus) s.gap = true;  // a window cannot extend to T = infinity
  return s;
}

bool has_window(const CriticalSample& s) { return s.c_minus.has_value(); }

}  // namespace

PitchforkKind classify_pitchfork(const Game& game) {
  game.require_two_action();
  const RawCoefficients raw = raw_coefficients(game);
  if (std::abs(raw.a) < kDegeneracyThreshold || std::abs(raw.c) < kDegeneracyThreshold) return PitchforkKind::kNone;
  const double p = -raw.b / raw.a;
  const double q = -raw.d / raw.c;
  const bool multi_ne = raw.a * raw.c > 0.0 && p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0;
  if (!multi_ne) return PitchforkKind::kNone;
  constexpr double tol = 1e-9;
  const bool same_a = std::abs(raw.a - raw.c) <= tol * std::max({1.0, std::abs(raw.a), std::abs(raw.c)});
  const double ba = raw.b / raw.a;
  const double dc = raw.d / raw.c;
  const bool balanced = raw.a > 0.0 ? std::abs(ba + dc + 1.0) <= tol : std::abs(ba - dc) <= tol;
  return same_a && balanced ? PitchforkKind::kContinuous : PitchforkKind::kDiscontinuous;
}

std::optional<PitchforkEvidence> pitchfork_evidence(const Game& game, double t_min, double t_max) {
  game.require_two_action();
  if (!(t_min > 0.0 && t_max > t_min)) throw DomainError("pitchfork_evidence: need 0 < t_min < t_max");
  const RawCoefficients raw = raw_coefficients(game);
  auto count = [&](double t) { return count_rest_points(reduce(raw, Temperatures::equal(t))); };
  const auto trans = count_transitions(count, log_grid(t_min, t_max, 400));
  for (auto it = trans.rbegin(); it != trans.rend(); ++it) {
    if (it->n_lo == 3 && it->n_hi == 1) return evidence_at(game, it->t);
  }
  return std::nullopt;
}

BifurcationDiagram sweep(const Game& game, SweepAxis axis, double fixed, double t_min, double t_max, int steps) {
  game.require_two_action();
  if (!(t_min > 0.0 && t_max >= t_min)) throw DomainError("sweep: need 0 < t_min <= t_max");
  if (steps < 2) throw std::invalid_argument("sweep: need at least two grid points");
  if (axis != SweepAxis::kEqual && !(fixed > 0.0)) throw DomainError("sweep: fixed temperature must be positive");

  const RawCoefficients raw = raw_coefficients(game);
  auto coeffs = [&](double t) { return reduce(raw, temps_on_axis(axis, t, fixed)); };
  auto count = [&](double t) { return count_rest_points(coeffs(t)); };

  std::vector<double> grid = log_grid(t_min, t_max, steps);
  const auto trans = count_transitions(count, grid);

  BifurcationDiagram diag;
  diag.axis = axis;
  if (axis != SweepAxis::kEqual) diag.fixed_value = fixed;
  for (const auto& tr : trans) diag.critical_temperatures.push_back(tr.t);

  // Two levels of local 10x refinement around each transition.
  for (const auto& tr : trans) {
    auto idx = std::upper_bound(grid.begin(), grid.end(), tr.t) - grid.begin();
    double lo = grid[static_cast<std::size_t>(std::max<std::ptrdiff_t>(idx - 1, 0))];
    double hi = grid[static_cast<std::size_t>(std::min<std::ptrdiff_t>(idx, static_cast<std::ptrdiff_t>(grid.size()) - 1))];
    std::vector<double> extra;
    for (int level = 0; level < 2 && hi > lo; ++level) {
      const auto sub = log_grid(lo, hi, 11);
      extra.insert(extra.end(), sub.begin() + 1, sub.end() - 1);
      const auto j = std::upper_bound(sub.begin(), sub.end(), tr.t) - sub.begin();
      lo = sub[static_cast<std::size_t>(std::max<std::ptrdiff_t>(j - 1, 0))];
      hi = sub[static_cast<std::size_t>(std::min<std::ptrdiff_t>(j, 10))];
    }
    // Bracket of the transition itself, on each side.
    extra.push_back(tr.lo);
    extra.push_back(tr.hi);
    grid.insert(grid.end(), extra.begin(), extra.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Column> columns;
  columns.push_back({grid.front(), solve_general(coeffs(grid.front()))});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    Column next{grid[i], solve_general(coeffs(grid[i]))};
    refine_between(columns, columns.back(), next, coeffs, 0);
    columns.push_back(std::move(next));
  }
  diag.branches = stitch(columns);

  if (axis == SweepAxis::kEqual) {
    for (auto it = trans.rbegin(); it != trans.rend(); ++it) {
      if (it->n_lo == 3 && it->n_hi == 1) {
        diag.evidence = evidence_at(game, it->t);
        if (diag.evidence) diag.pitchfork_kind = kind_from_evidence(*diag.evidence);
        break;
      }
    }
  }
  return diag;
}

BifurcationDiagram sweep_equal_T(const Game& game, double t_min, double t_max, int steps) {
  return sweep(game, SweepAxis::kEqual, 0.0, t_min, t_max, steps);
}

InterceptProfile delta_extrema(double c_tilde, double d_tilde, double t_min, double t_max, int steps) {
  if (c_tilde == 0.0 || !std::isfinite(c_tilde) || !std::isfinite(d_tilde)) {
    throw DomainError("delta_extrema: c must be finite and nonzero");
  }
  if (!(t_min > 0.0 && t_max >= t_min) || steps < 1) throw DomainError("delta_extrema: bad temperature grid");
  InterceptProfile prof;
  prof.delta_min = kInf;
  prof.delta_max = -kInf;
  for (double t : log_grid(t_min, t_max, steps)) {
    const GFunction gf{c_tilde / t, d_tilde / t};
    InterceptSample s{};
    s.temperature = t;
    const auto [lo, hi] = delta_range(gf, &s.u_inflection, &s.delta_at_inflection, &s.delta_at_zero);
    prof.delta_min = std::min(prof.delta_min, lo);
    prof.delta_max = std::max(prof.delta_max, hi);
    prof.samples.push_back(s);
  }
  // For c < 0, g(u; c, d) = g(-u; -c, d + c), so the ratio maps to -1 - d/c.
  const double r = d_tilde / c_tilde;
  const auto [mn, mx] = unbounded_flags(c_tilde > 0.0 ? r : -1.0 - r);
  prof.min_unbounded = mn;
  prof.max_unbounded = mx;
  return prof;
}

InterceptExtrema intercept_extrema(double d_over_c) {
  if (!std::isfinite(d_over_c)) throw DomainError("intercept_extrema: ratio must be finite");
  // Extrema over T_Y are searched over c = 1/T_Y with d = r c, on log10(c).
  auto lo_at = [&](double lc) {
    const double c = std::pow(10.0, lc);
    return delta_range({c, d_over_c * c}).first;
  };
  auto hi_at = [&](double lc) {
    const double c = std::pow(10.0, lc);
    return -delta_range({c, d_over_c * c}).second;
  };
  constexpr double lc_min = -4.0, lc_max = 4.0;
  constexpr int n = 321;
  auto refine = [&](auto&& f) {
    double best_x = lc_min, best = kInf;
    for (int i = 0; i < n; ++i) {
      const double x = lc_min + (lc_max - lc_min) * i / (n - 1);
      const double v = f(x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    const double h = (lc_max - lc_min) / (n - 1);
    const auto [x, v] = roots::golden_min(f, std::max(lc_min, best_x - h), std::min(lc_max, best_x + h), 100);
    return std::min(v, best);
  };
  const auto [mn_unb, mx_unb] = unbounded_flags(d_over_c);
  InterceptExtrema out{};
  out.min_unbounded = mn_unb;
  out.max_unbounded = mx_unb;
  out.min = mn_unb ? -kInf : refine(lo_at);
  out.max = mx_unb ? kInf : -refine(hi_at);
  return out;
}

CriticalSample critical_window(const Game& game, CurveOrientation orientation, double t_fixed) {
  game.require_two_action();
  if (!(t_fixed > 0.0)) throw DomainError("critical_window: fixed temperature must be positive");
  const Game& g = orientation == CurveOrientation::kTxAtFixedTy ? game : game.swapped();
  return window_tx(raw_coefficients(g), t_fixed);
}

CriticalCurve critical_curve(const Game& game, CurveOrientation orientation, const std::vector<double>& grid) {
  game.require_two_action();
  if (grid.empty()) throw std::invalid_argument("critical_curve: empty grid");
  CriticalCurve curve;
  curve.orientation = orientation;
  for (double t : grid) curve.samples.push_back(critical_window(game, orientation, t));

  for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
    const auto& a = curve.samples[i];
    const auto& b = curve.samples[i + 1];
    if (a.gap || b.gap || !has_window(a) || has_window(b) || !(b.t_fixed > a.t_fixed)) continue;
    double lo = a.t_fixed, hi = b.t_fixed;
    while (hi - lo > 1e-6 * 0.5) {
      const double mid = 0.5 * (lo + hi);
      (has_window(critical_window(game, orientation, mid)) ? lo : hi) = mid;
    }
    curve.closing_temperature = 0.5 * (lo + hi);
  }
  return curve;
}

LowTemperatureWindowLimits low_temperature_window_limits(double b_over_a, double d_over_c, double a_tilde) {
  if (!(a_tilde > 0.0) || !std::isfinite(a_tilde)) throw NotApplicable("low_temperature_window_limits: need a~ > 0");
  double p = b_over_a, r = d_over_c;
  // Relabeling both players' actions maps b/a -> -1 - b/a and d/c -> -1 - d/c.
  if (!(p > 0.0)) {
    p = -1.0 - p;
    r = -1.0 - r;
  }
  if (!(p > 0.0 && r > -1.0 && r < -0.5)) throw NotApplicable("low_temperature_window_limits: ratios outside the step-limit region");
  const double u_tilde = std::log(-r / (1.0 + r));
  return {u_tilde, a_tilde / u_tilde * p, a_tilde / u_tilde * (p + 1.0)};
}

CuspPoint cusp_locate() {
  auto width = [](double a) {
    if (a < 4.0) return -1.0;
    const auto cb = symmetric_critical_b(a);
    return cb.b_plus - cb.b_minus;
  };
  double lo = 2.0, hi = 8.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (width(mid) > 0.0 ? hi : lo) = mid;
  }
  const double a = width(lo) >= 0.0 ? lo : hi;
  const auto cb = symmetric_critical_b(a);
  return {a, 0.5 * (cb.b_minus + cb.b_plus)};
}

}  // namespace qlearndyn
