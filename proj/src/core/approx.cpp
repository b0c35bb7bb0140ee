#include "core/approx.hpp"

#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace fzr::approx {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct RescaledTarget {
  const LatentDensity& target;
  double m_star;        // observed mode rescaled to (0,1)
  double s;             // observed precision
  double w;             // ub - lb
  double log_odds_m;    // ln(m*/(1-m*))

  // First/second derivative of h(y; m*, s) + ln f_Y at rescaled y.
  double k1(double y) const {
    const double d1 = w * target.dlogpdf(target.lb + w * y);
    return d1 + s * log_odds_m + s * (special::digamma(s - s * y) - special::digamma(s * y));
  }
  double k2(double y) const {
    const double d2 = w * w * target.d2logpdf(target.lb + w * y);
    return d2 - s * s * (special::trigamma(s * y) + special::trigamma(s - s * y));
  }
};

// Mode/curvature fit: place the proposal mode at the root of k1 and match the
// second derivative there.
B4PProposal laplace_fit(const RescaledTarget& rt, int iterations) {
  double lo = 1e-9, hi = 1.0 - 1e-9;
  double flo = rt.k1(lo);
  if (!(flo > 0.0)) {
    // k1 should rise to +inf at the lower edge; fall back to the rescaled mode
    B4PProposal p{rt.m_star, std::max(rt.s, 4.0), iterations, false, true};
    return p;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rt.k1(mid) > 0.0 ? lo : hi) = mid;
  }
  const double ym = 0.5 * (lo + hi);
  double kappa = rt.k2(ym);
  if (!(kappa < 0.0)) kappa = -1.0;
  const double sigma = 2.0 - kappa * ym * (1.0 - ym);
  const double lambda = (1.0 + ym * (sigma - 2.0)) / sigma;
  return {lambda, sigma, iterations, false, true};
}

}  // namespace

double log_unnorm_posterior_y(double y, double m, double s, const LatentDensity& target) {
  const double w = target.ub - target.lb;
  const double ys = (y - target.lb) / w;
  if (!(ys > 0.0 && ys < 1.0)) return -kInf;
  const double ms = (m - target.lb) / w;
  const double h = -std::lgamma(ys * s) - std::lgamma(s - s * ys) +
                   s * ys * (std::log(ms) - std::log1p(-ms));
  return h + target.logpdf(y);
}

B4PProposal fit_b4p(double m, double s, const LatentDensity& target, double eps, int max_iter) {
  const double w = target.ub - target.lb;
  require(s > 0.0, ErrorCode::invalid_argument, "fit_b4p: precision must be positive");
  require(eps > 0.0, ErrorCode::invalid_argument, "fit_b4p: eps must be positive");
  const double m_star = (m - target.lb) / w;
  require(m_star > 0.0 && m_star < 1.0, ErrorCode::invalid_argument,
          "fit_b4p: observed mode must be interior to the bounds");
  RescaledTarget rt{target, m_star, s, w, std::log(m_star) - std::log1p(-m_star)};

  const double lam_lo = 1e-12, lam_hi = 1.0 - 1e-12;
  const double sig_lo = 1e-10, sig_hi = 1e15;

  double lambda = m_star;  // y^(0) = rescaled observed mode
  double sigma = s;        // sigma^(0) = observed precision
  for (int it = 1; it <= max_iter; ++it) {
    const double y = lambda;
    const double k1 = rt.k1(y);
    const double k2 = rt.k2(y);
    double lam_new = (1.0 + y * (-2.0 + k1 + sigma - k1 * y)) / sigma;
    double sig_new = (1.0 - (-1.0 + y) * y * (-2.0 + k2 * (-1.0 + y) * y)) /
                     (lambda - 2.0 * lambda * y + y * y);
    // Damp toward the previous iterate while an update leaves the domain.
    int halvings = 0;
    while ((!(lam_new > lam_lo && lam_new < lam_hi) || !(sig_new > sig_lo && sig_new < sig_hi) ||
            !std::isfinite(lam_new) || !std::isfinite(sig_new)) &&
           halvings < 10) {
      lam_new = 0.5 * (lam_new + lambda);
      sig_new = 0.5 * (sig_new + sigma);
      if (!std::isfinite(lam_new)) lam_new = lambda;
      if (!std::isfinite(sig_new)) sig_new = sigma;
      ++halvings;
    }
    if (!(lam_new > lam_lo && lam_new < lam_hi && sig_new > sig_lo && sig_new < sig_hi))
      throw Error(ErrorCode::numeric, "fit_b4p: update left the legal domain despite damping");
    const bool done = std::fabs(y / lam_new - 1.0) < eps && halvings == 0;
    lambda = lam_new;
    sigma = sig_new;
    if (done) return {lambda, sigma, it, true, false};
  }
  return laplace_fit(rt, max_iter);
}

double sample_y_conditional(const B4PProposal& prop, double lb, double ub, RngStream& rng) {
  const double a = prop.lambda_hat * prop.sigma_hat;
  const double b = prop.sigma_hat - a;
  require(a > 0.0 && b > 0.0, ErrorCode::invalid_argument,
          "sample_y_conditional: invalid proposal shapes");
  const double ystar = std::clamp(rng.beta(a, b), 1e-14, 1.0 - 1e-14);
  return lb + (ub - lb) * ystar;
}

MaximizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, int max_iter, double grad_tol) {
  const int d = static_cast<int>(x0.size());
  Eigen::VectorXd x = x0;
  double fx = f(x);
  require(std::isfinite(fx), ErrorCode::invalid_argument,
          "maximize: objective not finite at the starting point");

  auto gradient = [&](const Eigen::VectorXd& xx) {
    Eigen::VectorXd g(d);
    Eigen::VectorXd xp = xx;
    for (int j = 0; j < d; ++j) {
      const double h = 1e-6 * (1.0 + std::fabs(xx(j)));
      xp(j) = xx(j) + h;
      const double fp = f(xp);
      xp(j) = xx(j) - h;
      const double fm = f(xp);
      xp(j) = xx(j);
      g(j) = (fp - fm) / (2.0 * h);
    }
    return g;
  };

  Eigen::MatrixXd Binv = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd g = gradient(x);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < grad_tol * (1.0 + std::fabs(fx)))
      return {x, fx, it, true};
    Eigen::VectorXd p = Binv * g;  // ascent direction
    if (p.dot(g) <= 0.0) {
      Binv.setIdentity();
      p = g;
    }
    double step = 1.0;
    double fn = fx;
    Eigen::VectorXd xn = x;
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls) {
      xn = x + step * p;
      fn = f(xn);
      if (std::isfinite(fn) && fn >= fx + 1e-4 * step * p.dot(g)) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return {x, fx, it, g.lpNorm<Eigen::Infinity>() < 1e-4 * (1.0 + std::fabs(fx))};
    const Eigen::VectorXd gn = gradient(xn);
    const Eigen::VectorXd sv = xn - x;
    const Eigen::VectorXd yv = g - gn;  // descent convention for -f
    const double sy = sv.dot(yv);
    if (sy > 1e-12) {
      const Eigen::VectorXd By = Binv * yv;
      Binv += ((sy + yv.dot(By)) / (sy * sy)) * (sv * sv.transpose()) -
              (By * sv.transpose() + sv * By.transpose()) / sy;
    }
    const double improvement = fn - fx;
    x = xn;
    fx = fn;
    g = gn;
    if (improvement < 1e-13 * (1.0 + std::fabs(fx)) && g.lpNorm<Eigen::Infinity>() < 1e-5 * (1.0 + std::fabs(fx)))
      return {x, fx, it + 1, true};
  }
  return {x, fx, it, false};
}

namespace {

Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd H(d, d);
  const double f0 = f(x);
  Eigen::VectorXd h(d);
  for (int j = 0; j < d; ++j) h(j) = 1e-4 * (1.0 + std::fabs(x(j)));
  Eigen::VectorXd xp = x;
  for (int j = 0; j < d; ++j) {
    xp(j) = x(j) + h(j);
    const double fp = f(xp);
    xp(j) = x(j) - h(j);
    const double fm = f(xp);
    xp(j) = x(j);
    H(j, j) = (fp - 2.0 * f0 + fm) / (h(j) * h(j));
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      xp(j) = x(j) + h(j);
      xp(k) = x(k) + h(k);
      const double fpp = f(xp);
      xp(k) = x(k) - h(k);
      const double fpm = f(xp);
      xp(j) = x(j) - h(j);
      const double fmm = f(xp);
      xp(k) = x(k) + h(k);
      const double fmp = f(xp);
      xp(j) = x(j);
      xp(k) = x(k);
      H(j, k) = H(k, j) = (fpp - fpm - fmp + fmm) / (4.0 * h(j) * h(k));
    }
  }
  return H;
}

// Unmixed third derivatives by the five-point stencil, with a rounding-noise
// floor: below it the estimate is treated as exactly zero so quadratic
// targets recover delta = 0.
Eigen::VectorXd fd_third_unmixed(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd T(d);
  Eigen::VectorXd xp = x;
  for (int j = 0; j < d; ++j) {
    const double h = 2e-3 * (1.0 + std::fabs(x(j)));
    xp(j) = x(j) + 2.0 * h;
    const double f2p = f(xp);
    xp(j) = x(j) + h;
    const double f1p = f(xp);
    xp(j) = x(j) - h;
    const double f1m = f(xp);
    xp(j) = x(j) - 2.0 * h;
    const double f2m = f(xp);
    xp(j) = x(j);
    const double t = (f2p - 2.0 * f1p + 2.0 * f1m - f2m) / (2.0 * h * h * h);
    const double scale = std::max({std::fabs(f2p), std::fabs(f1p), std::fabs(f1m), std::fabs(f2m), 1.0});
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale / (2.0 * h * h * h);
    T(j) = std::fabs(t) < noise ? 0.0 : t;
  }
  return T;
}

// Solve t = q * zeta1(t), q >= 0 (unique root, RHS decreasing in t).
double solve_t(double q) {
  if (q <= 0.0) return 0.0;
  double lo = 0.0, hi = q * special::zeta1(0.0) + 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid - q * special::zeta1(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SNApprox fit_skewnormal(const std::function<double(const Eigen::VectorXd&)>& log_post,
                        const Eigen::VectorXd& theta_init) {
  const int d = static_cast<int>(theta_init.size());
  require(d >= 1 && theta_init.allFinite(), ErrorCode::invalid_argument,
          "fit_skewnormal: bad starting point");

  // Mode search, with deterministic jitter restarts if the curvature check fails.
  Eigen::VectorXd mode;
  Eigen::MatrixXd P;  // negative Hessian at the mode
  bool have_mode = false;
  for (int attempt = 0; attempt < 4 && !have_mode; ++attempt) {
    Eigen::VectorXd x0 = theta_init;
    if (attempt > 0) {
      for (int j = 0; j < d; ++j) {
        const double off = 0.05 * attempt * (1.0 + std::fabs(theta_init(j)));
        x0(j) += ((j + attempt) % 2 == 0 ? off : -off);
      }
    }
    MaximizeResult res = maximize(log_post, x0);
    Eigen::MatrixXd H = fd_hessian(log_post, res.x);
    Eigen::MatrixXd negH = -0.5 * (H + H.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(negH);
    if (llt.info() == Eigen::Success) {
      mode = res.x;
      P = negH;
      have_mode = true;
    }
  }
  require(have_mode, ErrorCode::numeric,
          "fit_skewnormal: could not locate a mode with negative-definite Hessian");

  const Eigen::VectorXd T = fd_third_unmixed(log_post, mode);

  // Damped fixed point on (t, eta, Omega) from the delta = 0 state.
  double t = 0.0;
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd omega = P.inverse();
  bool fell_back = false;
  int iterations = 0;
  if (T.lpNorm<Eigen::Infinity>() > 0.0) {
    bool converged = false;
    double damp = 1.0;
    for (int it = 0; it < 300; ++it) {
      ++iterations;
      const double z3 = special::zeta3(t);
      Eigen::VectorXd eta_new(d);
      for (int j = 0; j < d; ++j) eta_new(j) = std::cbrt(T(j) / z3);
      eta_new = eta + damp * (eta_new - eta);
      // Omega^-1 = P + zeta2(t) eta eta'; shrink the skew if it breaks PD.
      Eigen::MatrixXd M;
      Eigen::LLT<Eigen::MatrixXd> llt;
      int shrink = 0;
      for (; shrink < 60; ++shrink) {
        M = P + special::zeta2(t) * eta_new * eta_new.transpose();
        llt.compute(M);
        if (llt.info() == Eigen::Success) break;
        eta_new *= 0.7;
      }
      if (shrink == 60) {
        fell_back = true;
        break;
      }
      const Eigen::MatrixXd omega_new = llt.solve(Eigen::MatrixXd::Identity(d, d));
      const double q = eta_new.dot(omega_new * eta_new);
      const double t_new = solve_t(q);
      const double move = std::fabs(t_new - t) + (eta_new - eta).lpNorm<Eigen::Infinity>();
      eta = eta_new;
      omega = omega_new;
      if (!std::isfinite(t_new)) {
        fell_back = true;
        break;
      }
      if (std::fabs(t_new - t) > 10.0 * (1.0 + std::fabs(t))) damp *= 0.5;
      t = t_new;
      if (move < 1e-12 * (1.0 + t)) {
        converged = true;
        break;
      }
    }
    if (!converged && !fell_back) fell_back = true;
    if (fell_back) {
      t = 0.0;
      eta.setZero();
      omega = P.inverse();
    }
  }

  const double q = eta.dot(omega * eta);
  const Eigen::VectorXd omega_eta = omega * eta;
  const Eigen::VectorXd delta = omega_eta / std::sqrt(1.0 + q);
  const Eigen::MatrixXd sigma = omega - delta * delta.transpose();
  const Eigen::VectorXd location = mode - special::zeta1(t) * omega_eta;

  return {mode, dists::SkewNormal(location, sigma, delta), t, iterations, fell_back};
}

Eigen::VectorXd sample_theta_conditional(const SNApprox& approx, RngStream& rng) {
  return approx.dist.sample(rng);
}

}  // namespace fzr::approx
