#include "core/fuzznum.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace fzr {

TrapezoidalFuzzyNumber::TrapezoidalFuzzyNumber(double a1_, double a2_, double a3_, double a4_)
    : a1(a1_), a2(a2_), a3(a3_), a4(a4_) {
  require(std::isfinite(a1) && std::isfinite(a4) && a1 <= a2 && a2 <= a3 && a3 <= a4,
          ErrorCode::invalid_argument, "trapezoid: need a1 <= a2 <= a3 <= a4");
}

double TrapezoidalFuzzyNumber::membership(double x) const {
  if (x < a1 || x > a4) return 0.0;
  if (x < a2) return (x - a1) / (a2 - a1);
  if (x <= a3) return 1.0;
  return (a4 - x) / (a4 - a3);
}

BetaFuzzyNumber::BetaFuzzyNumber(double mode, double precision, double lower, double upper)
    : m(mode), s(precision), lb(lower), ub(upper) {
  require(std::isfinite(lb) && std::isfinite(ub) && lb < ub, ErrorCode::invalid_argument,
          "beta fuzzy number: need lb < ub");
  require(m > lb && m < ub, ErrorCode::invalid_argument,
          "beta fuzzy number: mode must be interior to (lb, ub)");
  require(s > 0.0 && std::isfinite(s), ErrorCode::invalid_argument,
          "beta fuzzy number: precision must be positive");
}

double BetaFuzzyNumber::membership(double x) const {
  if (x <= lb || x >= ub) return 0.0;
  if (x == m) return 1.0;
  const double w = ub - lb;
  const double ms = (m - lb) / w;
  const double p = s * ms;
  const double q = s * (1.0 - ms);
  const double lhs = p * std::log((x - lb) / (m - lb));
  const double rhs = q * std::log((ub - x) / (ub - m));
  return std::exp(lhs + rhs);
}

Interval alpha_cut(const BetaFuzzyNumber& fn, double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::invalid_argument, "alpha_cut: alpha in [0,1]");
  if (alpha == 0.0) return {fn.lb, fn.ub};
  if (alpha == 1.0) return {fn.m, fn.m};
  auto bisect = [&](double lo, double hi, bool rising) {
    // membership - alpha changes sign exactly once on each flank
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool above = fn.membership(mid) >= alpha;
      if (above == rising)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(fn.lb, fn.m, true), bisect(fn.m, fn.ub, false)};
}

double centroid(const BetaFuzzyNumber& fn) {
  auto f = [&](double x) { return fn.membership(x); };
  auto xf = [&](double x) { return x * fn.membership(x); };
  const std::vector<double> pts{fn.m};
  const double mass = quad::integrate(f, fn.lb, fn.ub, 1e-8, 0.0, pts).value;
  const double moment = quad::integrate(xf, fn.lb, fn.ub, 1e-8, 0.0, pts).value;
  return moment / mass;
}

double kaufman_index(const BetaFuzzyNumber& fn) {
  const Interval half = alpha_cut(fn, 0.5);
  auto below = [&](double x) { return fn.membership(x); };          // nearest crisp value 0
  auto above = [&](double x) { return 1.0 - fn.membership(x); };    // nearest crisp value 1
  double acc = 0.0;
  if (half.lo > fn.lb) acc += quad::integrate(below, fn.lb, half.lo, 1e-8).value;
  acc += quad::integrate(above, half.lo, half.hi, 1e-8, 0.0, {fn.m}).value;
  if (half.hi < fn.ub) acc += quad::integrate(below, half.hi, fn.ub, 1e-8).value;
  return 2.0 / (fn.ub - fn.lb) * acc;
}

namespace {

double conversion_objective(const TrapezoidalFuzzyNumber& tp, double m, double s) {
  const BetaFuzzyNumber fn(m, s, tp.a1, tp.a4);
  auto sq = [&](double x) {
    const double d = fn.membership(x) - tp.membership(x);
    return d * d;
  };
  // The trapezoid membership has kinks at a2 and a3; integrate piecewise.
  double acc = 0.0;
  const double eps = 1e-12 * (tp.a4 - tp.a1);
  double edges[4] = {tp.a1, tp.a2, tp.a3, tp.a4};
  for (int k = 0; k < 3; ++k) {
    if (edges[k + 1] - edges[k] > eps)
      acc += quad::integrate(sq, edges[k], edges[k + 1], 1e-9, 1e-14, {m}).value;
  }
  return acc;
}

// Precision whose half-cut width matches the trapezoid's, by bisection on log s.
double initial_precision(const TrapezoidalFuzzyNumber& tp, double m0) {
  const double target = (tp.a4 + tp.a3) / 2.0 - (tp.a1 + tp.a2) / 2.0;
  auto width = [&](double ls) {
    const BetaFuzzyNumber fn(m0, std::exp(ls), tp.a1, tp.a4);
    const Interval cut = alpha_cut(fn, 0.5);
    return cut.hi - cut.lo;
  };
  double lo = std::log(1e-2), hi = std::log(1e4);
  if (width(lo) <= target) return std::exp(lo);  // wider than any Beta shape can be
  if (width(hi) >= target) return std::exp(hi);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (width(mid) > target ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

ConversionResult trapezoid_to_beta(const TrapezoidalFuzzyNumber& tp) {
  require(tp.a1 < tp.a4, ErrorCode::invalid_argument,
          "trapezoid_to_beta: degenerate support (a1 == a4)");
  const double w = tp.a4 - tp.a1;
  double m0 = (tp.a2 + tp.a3) / 2.0;
  m0 = std::clamp(m0, tp.a1 + 1e-6 * w, tp.a4 - 1e-6 * w);
  const double s0 = initial_precision(tp, m0);

  // Unconstrained coordinates: u = logit of the rescaled mode, v = log s.
  auto from_uv = [&](double u, double v, double& m, double& s) {
    m = tp.a1 + w / (1.0 + std::exp(-u));
    s = std::exp(v);
  };
  auto obj = [&](double u, double v) {
    double m, s;
    from_uv(u, v, m, s);
    return conversion_objective(tp, m, s);
  };

  double u = std::log((m0 - tp.a1) / (tp.a4 - m0));
  double v = std::log(s0);
  double f = obj(u, v);

  // BFGS in two variables with numerical gradients and backtracking.
  double Binv[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  double g[2];
  auto grad = [&](double uu, double vv, double base, double* out) {
    const double hu = 1e-5 * (1.0 + std::fabs(uu));
    const double hv = 1e-5 * (1.0 + std::fabs(vv));
    out[0] = (obj(uu + hu, vv) - obj(uu - hu, vv)) / (2.0 * hu);
    out[1] = (obj(uu, vv + hv) - obj(uu, vv - hv)) / (2.0 * hv);
    (void)base;
  };
  grad(u, v, f, g);
  int it = 0;
  for (; it < 200; ++it) {
    double p0 = -(Binv[0][0] * g[0] + Binv[0][1] * g[1]);
    double p1 = -(Binv[1][0] * g[0] + Binv[1][1] * g[1]);
    if (p0 * g[0] + p1 * g[1] > 0) {  // not a descent direction, reset
      Binv[0][0] = Binv[1][1] = 1.0;
      Binv[0][1] = Binv[1][0] = 0.0;
      p0 = -g[0];
      p1 = -g[1];
    }
    double step = 1.0;
    double fn = f;
    double un = u, vn = v;
    for (int ls = 0; ls < 40; ++ls) {
      un = u + step * p0;
      vn = std::clamp(v + step * p1, std::log(1e-3), std::log(1e6));
      fn = obj(un, vn);
      if (fn <= f + 1e-4 * step * (p0 * g[0] + p1 * g[1])) break;
      step *= 0.5;
    }
    const double su = un - u, sv = vn - v;
    double gn[2];
    grad(un, vn, fn, gn);
    const double yu = gn[0] - g[0], yv = gn[1] - g[1];
    const double sy = su * yu + sv * yv;
    if (sy > 1e-14) {
      // Sherman-Morrison BFGS inverse update.
      const double by0 = Binv[0][0] * yu + Binv[0][1] * yv;
      const double by1 = Binv[1][0] * yu + Binv[1][1] * yv;
      const double yby = yu * by0 + yv * by1;
      const double c1 = (sy + yby) / (sy * sy);
      Binv[0][0] += c1 * su * su - (by0 * su + su * by0) / sy;
      Binv[0][1] += c1 * su * sv - (by0 * sv + su * by1) / sy;
      Binv[1][0] = Binv[0][1];
      Binv[1][1] += c1 * sv * sv - (by1 * sv + sv * by1) / sy;
    }
    const double moved = std::fabs(fn - f);
    u = un;
    v = vn;
    f = fn;
    g[0] = gn[0];
    g[1] = gn[1];
    if (std::hypot(g[0], g[1]) < 1e-10 || (it > 4 && moved < 1e-14 * (1.0 + std::fabs(f)))) break;
  }
  if (it >= 200)
    throw Error(ErrorCode::numeric,
                "trapezoid_to_beta: optimizer failed to converge (residual " + std::to_string(f) + ")");
  double m, s;
  from_uv(u, v, m, s);
  return {BetaFuzzyNumber(m, s, tp.a1, tp.a4), f, it + 1};
}

}  // namespace fzr
