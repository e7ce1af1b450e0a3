#include "qlearndyn/rest_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlearndyn/errors.hpp"
#include "qlearndyn/roots.hpp"

namespace qlearndyn {

const char* to_string(Stability s) {
  switch (s) {
    case Stability::kStableNode: return "stable_node";
    case Stability::kStableSpiral: return "stable_spiral";
    case Stability::kSaddleUnstable: return "saddle_unstable";
  }
  return "?";
}

GValues g_eval(const GFunction& gf, double u) {
  const double su = logistic(u);
  const double w = gf.d + gf.c * su;
  const double g = logistic(w);
  const double one_minus_g = logistic(-w);
  const double gg = logistic_slope(w);  // g (1 - g)
  const double s = logistic_slope(u);   // 1 / (4 cosh^2(u/2))
  const double g1 = gf.c * gg * s;
  const double g2 = g1 * (gf.c * (one_minus_g - g) * s + (logistic(-u) - su));
  return {g, g1, g2};
}

double g_inflection(const GFunction& gf) {
  if (gf.c == 0.0) return 0.0;
  // g'' = -c g(1-g) s^2 q(u) with q strictly increasing.
  auto q = [&](double u) { return gf.c * std::tanh(0.5 * (gf.d + gf.c * logistic(u))) + 2.0 * std::sinh(u); };
  const double bound = std::asinh(0.5 * std::abs(gf.c)) + 1.0;
  const double f_lo = q(-bound);
  if (f_lo == 0.0) return -bound;
  if (q(bound) == 0.0) return bound;
  return roots::bisect(q, -bound, bound, f_lo);
}

double tangent_intercept(const GFunction& gf, double u) {
  const auto v = g_eval(gf, u);
  return v.g - u * v.g1;
}

namespace {

struct URoot {
  double u;
  bool degenerate;
};

// Roots of h on [lo, hi], where h is monotone between consecutive entries of
// `crit` (sorted, inside the interval). Critical points with |h| <= zero_tol
// count as tangent roots and are reported once.
template <class H, class DH>
std::vector<URoot> isolate(H&& h, DH&& dh, std::vector<double> crit, double lo, double hi, double zero_tol) {
  std::vector<double> pts{lo};
  for (double c : crit) {
    if (c > lo && c < hi && c != pts.back()) pts.push_back(c);
  }
  pts.push_back(hi);

  std::vector<double> val(pts.size());
  std::vector<bool> tangent(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    val[i] = h(pts[i]);
    if (i > 0 && i + 1 < pts.size() && std::abs(val[i]) <= zero_tol) {
      tangent[i] = true;
      val[i] = 0.0;
    }
  }

  std::vector<URoot> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (tangent[i]) out.push_back({pts[i], true});
    const int s0 = roots::sign_of(val[i]);
    const int s1 = roots::sign_of(val[i + 1]);
    if (s0 == 0 || s1 == 0 || s0 == s1) continue;
    double r = roots::bisect(h, pts[i], pts[i + 1], val[i]);
    r = roots::newton_polish(h, dh, r, pts[i], pts[i + 1]);
    out.push_back({r, false});
  }
  std::sort(out.begin(), out.end(), [](const URoot& x, const URoot& y) { return x.u < y.u; });
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i + 1].u - out[i].u < kTangencyPairGap) out[i].degenerate = out[i + 1].degenerate = true;
  }
  return out;
}

// Points where a g'(u) = 1 on [lo, hi]; a g' is unimodal with its extremum at
// the inflection point of g.
std::vector<double> parallel_points(const ReducedCoefficients& k, const GFunction& gf, double lo, double hi) {
  std::vector<double> crit;
  if (k.a * k.c <= 0.0) return crit;
  const double u0 = g_inflection(gf);
  auto dh = [&](double u) { return 1.0 - k.a * g_eval(gf, u).g1; };
  const double at_peak = dh(u0);
  if (at_peak > 0.0) return crit;
  if (at_peak == 0.0) {
    crit.push_back(u0);
    return crit;
  }
  if (u0 > lo) {
    if (auto r = roots::monotone_root(dh, lo, std::min(u0, hi))) crit.push_back(*r);
  }
  if (u0 < hi) {
    if (auto r = roots::monotone_root(dh, std::max(u0, lo), hi)) crit.push_back(*r);
  }
  std::sort(crit.begin(), crit.end());
  return crit;
}

std::vector<URoot> general_roots(const ReducedCoefficients& k) {
  if (k.a == 0.0 || std::abs(k.raw.a) < kDegeneracyThreshold) return {{k.b, false}};
  const GFunction gf{k.c, k.d};
  const double lo0 = std::min(k.b, k.b + k.a);
  const double hi0 = std::max(k.b, k.b + k.a);
  const double pad = 1e-9 * std::max({1.0, std::abs(lo0), std::abs(hi0)});
  const double lo = lo0 - pad;
  const double hi = hi0 + pad;

  // Scaled by a: h(u) = u - b - a g(u).
  auto h = [&](double u) { return u - k.b - k.a * g_eval(gf, u).g; };
  auto dh = [&](double u) { return 1.0 - k.a * g_eval(gf, u).g1; };
  const double eps = std::numeric_limits<double>::epsilon();
  const double zero_tol = 8.0 * eps * (std::abs(k.a) + std::abs(k.b) + std::max(std::abs(lo), std::abs(hi)));
  return isolate(h, dh, parallel_points(k, gf, lo, hi), lo, hi, zero_tol);
}

std::array<std::complex<double>, 2> eig2(double j11, double j12, double j21, double j22) {
  const double half_tr = 0.5 * (j11 + j22);
  const double det = j11 * j22 - j12 * j21;
  const std::complex<double> disc = std::sqrt(std::complex<double>(half_tr * half_tr - det, 0.0));
  return {half_tr + disc, half_tr - disc};
}

double eig_distance(const std::array<std::complex<double>, 2>& p, const std::array<std::complex<double>, 2>& q) {
  const double same = std::max(std::abs(p[0] - q[0]), std::abs(p[1] - q[1]));
  const double swap = std::max(std::abs(p[0] - q[1]), std::abs(p[1] - q[0]));
  return std::min(same, swap);
}

double scale_of(const ReducedCoefficients& k) {
  return 1.0 + std::abs(k.a) + std::abs(k.b) + std::abs(k.c) + std::abs(k.d);
}

StabilityInfo stability_unchecked(const LogitPoint& q, const ReducedCoefficients& k) {
  const double radicand = k.a * k.c * logistic_slope(q.u) * logistic_slope(q.v);
  const std::complex<double> r = std::sqrt(std::complex<double>(radicand, 0.0));
  StabilityInfo info;
  info.eigenvalues = {-1.0 + r, -1.0 - r};
  if (radicand < 0.0) {
    info.stability = Stability::kStableSpiral;
  } else if (info.eigenvalues[0].real() > 0.0) {
    info.stability = Stability::kSaddleUnstable;
  } else {
    info.stability = Stability::kStableNode;
  }

  // Five-point differences of the flow in logit coordinates. At a fixed point
  // the Jacobian there is similar to the (x, y) one, so the eigenvalues agree.
  // Near a double eigenvalue the spectrum is sqrt-sensitive to the entries, so
  // the stencil is fourth order.
  constexpr double step = 1e-3;
  auto field = [&](double u, double v) { return logit_velocity({u, v}, k); };
  auto diff = [&](double du, double dv) {
    const auto p1 = field(q.u + du, q.v + dv), m1 = field(q.u - du, q.v - dv);
    const auto p2 = field(q.u + 2 * du, q.v + 2 * dv), m2 = field(q.u - 2 * du, q.v - 2 * dv);
    return std::pair<double, double>{(8 * (p1.first - m1.first) - (p2.first - m2.first)) / (12 * step),
                                     (8 * (p1.second - m1.second) - (p2.second - m2.second)) / (12 * step)};
  };
  const auto ju = diff(step, 0.0), jv = diff(0.0, step);
  const auto fd = eig2(ju.first, jv.first, ju.second, jv.second);
  info.fd_deviation = eig_distance(info.eigenvalues, fd);
  return info;
}

double bracket_residual(const LogitPoint& q, const ReducedCoefficients& k) {
  const auto [du, dv] = logit_velocity(q, k);
  return std::max(std::abs(du), std::abs(dv));
}

}  // namespace

std::vector<double> solve_symmetric(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("solve_symmetric: non-finite coefficients");
  if (a == 0.0) return {logistic(b)};
  const double lo0 = std::min(b, b + a);
  const double hi0 = std::max(b, b + a);
  const double pad = 1e-9 * std::max({1.0, std::abs(lo0), std::abs(hi0)});
  auto h = [&](double u) { return u - b - a * logistic(u); };
  auto dh = [&](double u) { return 1.0 - a * logistic_slope(u); };

  std::vector<double> crit;
  if (a >= 4.0) {
    // s(1-s) = 1/a  =>  u = ln((1 +- r)/(1 -+ r)), r = sqrt(1 - 4/a)
    const double r = std::sqrt(1.0 - 4.0 / a);
    const double uc = std::log1p(r) - std::log1p(-r);
    crit = {-uc, uc};
  }
  std::vector<double> out;
  for (const auto& root : isolate(h, dh, crit, lo0 - pad, hi0 + pad, 1e-9)) out.push_back(logistic(root.u));
  return out;
}

CriticalB symmetric_critical_b(double a) {
  if (!(a >= 4.0)) throw DomainError("symmetric critical curve exists only for a >= 4");
  const double alpha = std::sqrt(a * a - 4.0 * a);
  const double lower = 4.0 * a / (a + alpha);  // a - alpha without cancellation
  const double upper = a + alpha;
  return {std::log(upper / lower) - 0.5 * upper, std::log(lower / upper) - 0.5 * lower};
}

std::vector<RestPoint> solve_general(const ReducedCoefficients& k) {
  std::vector<RestPoint> out;
  for (const auto& root : general_roots(k)) {
    RestPoint rp;
    rp.logit = {root.u, k.d + k.c * logistic(root.u)};
    rp.point = from_logit(rp.logit);
    rp.residual = bracket_residual(rp.logit, k);
    const auto info = stability_unchecked(rp.logit, k);
    rp.eigenvalues = info.eigenvalues;
    rp.stability = info.stability;
    rp.fd_deviation = info.fd_deviation;
    rp.degenerate = root.degenerate;
    out.push_back(rp);
  }
  return out;
}

int count_rest_points(const ReducedCoefficients& k) { return static_cast<int>(general_roots(k).size()); }

StabilityInfo stability_eigenvalues(const LogitPoint& point, const ReducedCoefficients& k) {
  if (bracket_residual(point, k) > 1e-9 * scale_of(k)) throw DomainError("point is not a rest point");
  return stability_unchecked(point, k);
}

StabilityInfo stability_eigenvalues(const StrategyPoint& point, const ReducedCoefficients& k) {
  if (!(point.x > 0.0 && point.x < 1.0 && point.y > 0.0 && point.y < 1.0)) {
    throw DomainError("rest point must be interior");
  }
  const LogitPoint q = to_logit(point);
  if (bracket_residual(q, k) > 1e-7 * scale_of(k)) throw DomainError("point is not a rest point");
  return stability_unchecked(q, k);
}

TangencyDiagnostics tangency_conditions(const ReducedCoefficients& k, double u) {
  const double w = k.d + k.c * logistic(u);
  const double ac = k.a * k.c;
  return {ac >= 16.0, ac - 1.0 / (logistic_slope(u) * logistic_slope(w))};
}

double tangency_condition_xy(const ReducedCoefficients& k, const StrategyPoint& p) {
  return k.a * k.c - 1.0 / (p.x * (1.0 - p.x) * p.y * (1.0 - p.y));
}

std::optional<CriticalTemperatures> critical_temperature_equal_T(const Game& game) {
  const RawCoefficients raw = raw_coefficients(game);
  if (std::abs(raw.a) < kDegeneracyThreshold || std::abs(raw.c) < kDegeneracyThreshold) return std::nullopt;
  const double p = -raw.b / raw.a;
  const double q = -raw.d / raw.c;
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) return std::nullopt;

  CriticalTemperatures result;
  if (raw.a * raw.c <= 0.0) return result;

  auto count_at = [&](double t) { return count_rest_points(reduce(raw, Temperatures::equal(t))); };
  // Tangency needs ac >= 16, i.e. T <= sqrt(a~ c~) / 4.
  const double t_hi = std::sqrt(raw.a * raw.c) / 4.0 * 1.001;
  const double t_lo = t_hi * 1e-3;
  constexpr int kGrid = 200;
  double prev_t = t_lo;
  int prev_n = count_at(prev_t);

  // Tangency system in (u, T), multiplied through by T.
  auto system = [&](double u, double t) {
    const GFunction gf{raw.c / t, raw.d / t};
    const auto gv = g_eval(gf, u);
    return std::array<double, 2>{u * t - raw.b - raw.a * gv.g, t - raw.a * gv.g1};
  };
  auto norm = [](const std::array<double, 2>& f) { return std::max(std::abs(f[0]), std::abs(f[1])); };

  for (int i = 1; i <= kGrid; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / kGrid);
    const int n = count_at(t);
    if (n != prev_n) {
      double lo = prev_t, hi = t;
      const int n_lo = prev_n;
      for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        (count_at(mid) == n_lo ? lo : hi) = mid;
      }
      const double t_multi = n_lo > n ? lo : hi;

      // Seed u at the parallel point with the smallest line-g gap.
      const auto k = reduce(raw, Temperatures::equal(t_multi));
      const GFunction gf{k.c, k.d};
      const double span_lo = std::min(k.b, k.b + k.a), span_hi = std::max(k.b, k.b + k.a);
      auto crit = parallel_points(k, gf, span_lo - 1.0, span_hi + 1.0);
      if (crit.empty()) crit.push_back(g_inflection(gf));
      double u = crit.front();
      for (double c : crit) {
        if (norm(system(c, t_multi)) < norm(system(u, t_multi))) u = c;
      }
      const double u_seed = u;
      double tc = t_multi;
      double res = norm(system(u, tc));

      // Damped Newton polish with a finite-difference Jacobian.
      for (int it = 0; it < 100 && res > 1e-15 * (1.0 + std::abs(raw.a) + std::abs(raw.b)); ++it) {
        const double hu = 1e-7 * (1.0 + std::abs(u));
        const double ht = 1e-7 * tc;
        const auto f = system(u, tc);
        const auto fu1 = system(u + hu, tc), fu0 = system(u - hu, tc);
        const auto ft1 = system(u, tc + ht), ft0 = system(u, tc - ht);
        const double j11 = (fu1[0] - fu0[0]) / (2 * hu), j12 = (ft1[0] - ft0[0]) / (2 * ht);
        const double j21 = (fu1[1] - fu0[1]) / (2 * hu), j22 = (ft1[1] - ft0[1]) / (2 * ht);
        const double det = j11 * j22 - j12 * j21;
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
        const double du = (f[0] * j22 - f[1] * j12) / det;
        const double dt = (j11 * f[1] - j21 * f[0]) / det;
        bool improved = false;
        for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
          const double nu = u - lambda * du, nt = tc - lambda * dt;
          if (!(nt > 0.0)) continue;
          const double nr = norm(system(nu, nt));
          if (nr < res) {
            u = nu;
            tc = nt;
            res = nr;
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
      if (std::abs(tc - t_multi) > 1e-3 * t_multi) {
        // Newton drifted to another branch; keep the bracketed transition.
        u = u_seed;
        tc = t_multi;
        res = norm(system(u, tc));
      }
      // At a pitchfork the root is triple and Newton only pins u to about
      // res^(1/3). The inflection of g is the exact tangency point there.
      auto infl_at = [&](double t) { return g_inflection({raw.c / t, raw.d / t}); };
      auto slope_gap = [&](double t) { return system(infl_at(t), t)[1]; };
      double t0 = tc, t1 = tc * (1.0 + 1e-7), f0 = slope_gap(t0), f1 = slope_gap(t1);
      for (int it = 0; it < 20 && f1 != f0 && f1 != 0.0; ++it) {
        const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        t0 = t1;
        f0 = f1;
        t1 = t2;
        f1 = slope_gap(t1);
      }
      if (std::isfinite(t1) && t1 > 0.0 && std::abs(t1 - tc) < 1e-6 * tc) {
        const double u_infl = infl_at(t1);
        const double res_infl = norm(system(u_infl, t1));
        if (res_infl <= std::max(res, 1e-12)) {
          u = u_infl;
          tc = t1;
          res = res_infl;
        }
      }
      if (res > 1e-8) throw NumericFailure("critical temperature: tangency system not solved", res);
      result.temperatures.push_back(tc);
      result.u.push_back(u);
      result.residuals.push_back(res);
    }
    prev_t = t;
    prev_n = n;
  }
  return result;
}

}  // namespace qlearndyn
