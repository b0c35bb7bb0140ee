#include "core/dists.hpp"

#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace fzr::dists {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLnSqrt2Pi = 0.9189385332046727;

void check_interior(const Density& d, double y) {
  const Support s = support(d);
  require(y > s.lo && y < s.hi, ErrorCode::domain,
          "log-density derivative requested outside the open support");
}
}  // namespace

Beta::Beta(double a_, double b_) : a(a_), b(b_) {
  require(a > 0 && b > 0, ErrorCode::invalid_argument, "Beta: shapes must be positive");
}

Beta4P::Beta4P(double a_, double b_, double lb_, double ub_) : a(a_), b(b_), lb(lb_), ub(ub_) {
  require(a > 0 && b > 0, ErrorCode::invalid_argument, "Beta4P: shapes must be positive");
  require(lb < ub && std::isfinite(lb) && std::isfinite(ub), ErrorCode::invalid_argument,
          "Beta4P: need lb < ub");
}

LogitNormal::LogitNormal(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  require(sigma > 0 && std::isfinite(mu), ErrorCode::invalid_argument,
          "LogitNormal: sigma must be positive");
}

Kumaraswamy::Kumaraswamy(double a_, double b_) : a(a_), b(b_) {
  require(a > 0 && b > 0, ErrorCode::invalid_argument, "Kumaraswamy: shapes must be positive");
}

LogBilal::LogBilal(double theta_) : theta(theta_) {
  require(theta > 0, ErrorCode::invalid_argument, "LogBilal: theta must be positive");
}

TruncNormal::TruncNormal(double lb_, double ub_, double mu_, double sigma_)
    : lb(lb_), ub(ub_), mu(mu_), sigma(sigma_) {
  require(lb < ub, ErrorCode::invalid_argument, "TruncNormal: need lb < ub");
  require(sigma > 0 && std::isfinite(mu), ErrorCode::invalid_argument,
          "TruncNormal: sigma must be positive");
}

Lognormal::Lognormal(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  require(sigma > 0 && std::isfinite(mu), ErrorCode::invalid_argument,
          "Lognormal: sigma must be positive");
}

GammaDist::GammaDist(double shape_, double scale_) : shape(shape_), scale(scale_) {
  require(shape > 0 && scale > 0, ErrorCode::invalid_argument,
          "Gamma: shape and scale must be positive");
}

Support support(const Density& d) {
  return std::visit(
      [](const auto& v) -> Support {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta4P>) return {v.lb, v.ub};
        if constexpr (std::is_same_v<T, TruncNormal>) return {v.lb, v.ub};
        if constexpr (std::is_same_v<T, Lognormal> || std::is_same_v<T, GammaDist>)
          return {0.0, kInf};
        return {0.0, 1.0};
      },
      d);
}

double logpdf(const Density& d, double y) {
  const Support sp = support(d);
  if (!(y > sp.lo && y < sp.hi)) return -kInf;
  return std::visit(
      [y](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta>) {
          return (v.a - 1.0) * std::log(y) + (v.b - 1.0) * std::log1p(-y) -
                 special::log_beta(v.a, v.b);
        } else if constexpr (std::is_same_v<T, Beta4P>) {
          const double w = v.ub - v.lb;
          return (v.a - 1.0) * std::log(y - v.lb) + (v.b - 1.0) * std::log(v.ub - y) -
                 (v.a + v.b - 1.0) * std::log(w) - special::log_beta(v.a, v.b);
        } else if constexpr (std::is_same_v<T, LogitNormal>) {
          const double z = (std::log(y / (1.0 - y)) - v.mu) / v.sigma;
          return -0.5 * z * z - std::log(v.sigma) - kLnSqrt2Pi - std::log(y) - std::log1p(-y);
        } else if constexpr (std::is_same_v<T, Kumaraswamy>) {
          const double ya = std::pow(y, v.a);
          return std::log(v.a) + std::log(v.b) + (v.a - 1.0) * std::log(y) +
                 (v.b - 1.0) * std::log1p(-ya);
        } else if constexpr (std::is_same_v<T, LogBilal>) {
          return std::log(6.0 / v.theta) + (2.0 / v.theta - 1.0) * std::log(y) +
                 std::log1p(-std::pow(y, 1.0 / v.theta));
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          const double z = (y - v.mu) / v.sigma;
          const double za = (v.lb - v.mu) / v.sigma;
          const double zb = (v.ub - v.mu) / v.sigma;
          const double lz = std::log(special::norm_cdf(zb) - special::norm_cdf(za));
          return -0.5 * z * z - std::log(v.sigma) - kLnSqrt2Pi - lz;
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          const double z = (std::log(y) - v.mu) / v.sigma;
          return -0.5 * z * z - std::log(y) - std::log(v.sigma) - kLnSqrt2Pi;
        } else {  // GammaDist
          return (v.shape - 1.0) * std::log(y) - y / v.scale - v.shape * std::log(v.scale) -
                 std::lgamma(v.shape);
        }
      },
      d);
}

double dlogpdf_dy(const Density& d, double y) {
  check_interior(d, y);
  return std::visit(
      [y](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta>) {
          return (v.a - 1.0) / y - (v.b - 1.0) / (1.0 - y);
        } else if constexpr (std::is_same_v<T, Beta4P>) {
          return (v.a - 1.0) / (y - v.lb) - (v.b - 1.0) / (v.ub - y);
        } else if constexpr (std::is_same_v<T, LogitNormal>) {
          const double L = std::log(y / (1.0 - y));
          return -1.0 / y + 1.0 / (1.0 - y) - (L - v.mu) / (v.sigma * v.sigma * y * (1.0 - y));
        } else if constexpr (std::is_same_v<T, Kumaraswamy>) {
          const double ya = std::pow(y, v.a);
          return (v.a - 1.0) / y - (v.b - 1.0) * v.a * ya / (y * (1.0 - ya));
        } else if constexpr (std::is_same_v<T, LogBilal>) {
          const double u = std::pow(y, 1.0 / v.theta);
          const double du = u / (v.theta * y);
          return (2.0 / v.theta - 1.0) / y - du / (1.0 - u);
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          return -(y - v.mu) / (v.sigma * v.sigma);
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          return -1.0 / y - (std::log(y) - v.mu) / (v.sigma * v.sigma * y);
        } else {  // GammaDist
          return (v.shape - 1.0) / y - 1.0 / v.scale;
        }
      },
      d);
}

double d2logpdf_dy2(const Density& d, double y) {
  check_interior(d, y);
  return std::visit(
      [y](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta>) {
          return -(v.a - 1.0) / (y * y) - (v.b - 1.0) / ((1.0 - y) * (1.0 - y));
        } else if constexpr (std::is_same_v<T, Beta4P>) {
          const double dl = y - v.lb, dr = v.ub - y;
          return -(v.a - 1.0) / (dl * dl) - (v.b - 1.0) / (dr * dr);
        } else if constexpr (std::is_same_v<T, LogitNormal>) {
          const double L = std::log(y / (1.0 - y));
          const double s2 = v.sigma * v.sigma;
          const double g = y * (1.0 - y);
          return 1.0 / (y * y) + 1.0 / ((1.0 - y) * (1.0 - y)) -
                 (1.0 / s2) * (1.0 / (g * g) + (L - v.mu) * (-1.0 / (y * y) + 1.0 / ((1.0 - y) * (1.0 - y))));
        } else if constexpr (std::is_same_v<T, Kumaraswamy>) {
          const double ya = std::pow(y, v.a);
          const double om = 1.0 - ya;
          const double d1 = v.a * ya / y;  // d(y^a)/dy
          const double d2 = v.a * (v.a - 1.0) * ya / (y * y);
          return -(v.a - 1.0) / (y * y) - (v.b - 1.0) * (d2 * om + d1 * d1) / (om * om);
        } else if constexpr (std::is_same_v<T, LogBilal>) {
          const double th = v.theta;
          const double u = std::pow(y, 1.0 / th);
          const double du = u / (th * y);
          const double d2u = (1.0 / th) * (1.0 / th - 1.0) * u / (y * y);
          const double om = 1.0 - u;
          return -(2.0 / th - 1.0) / (y * y) - (d2u * om + du * du) / (om * om);
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          return -1.0 / (v.sigma * v.sigma);
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          const double s2 = v.sigma * v.sigma;
          return 1.0 / (y * y) - (1.0 - (std::log(y) - v.mu)) / (s2 * y * y);
        } else {  // GammaDist
          return -(v.shape - 1.0) / (y * y);
        }
      },
      d);
}

double sample(const Density& d, RngStream& rng) {
  return std::visit(
      [&rng](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta>) {
          return rng.beta(v.a, v.b);
        } else if constexpr (std::is_same_v<T, Beta4P>) {
          return v.lb + (v.ub - v.lb) * rng.beta(v.a, v.b);
        } else if constexpr (std::is_same_v<T, LogitNormal>) {
          const double z = v.mu + v.sigma * rng.normal();
          return 1.0 / (1.0 + std::exp(-z));
        } else if constexpr (std::is_same_v<T, Kumaraswamy>) {
          const double u = rng.uniform();
          return std::pow(1.0 - std::pow(1.0 - u, 1.0 / v.b), 1.0 / v.a);
        } else if constexpr (std::is_same_v<T, LogBilal>) {
          return std::pow(rng.beta(2.0, 2.0), v.theta);
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          const double pa = special::norm_cdf((v.lb - v.mu) / v.sigma);
          const double pb = special::norm_cdf((v.ub - v.mu) / v.sigma);
          double p = pa + rng.uniform() * (pb - pa);
          p = std::min(std::max(p, 1e-300), 1.0 - 1e-16);
          const double x = v.mu + v.sigma * special::inv_norm_cdf(p);
          return std::min(std::max(x, std::nextafter(v.lb, v.ub)), std::nextafter(v.ub, v.lb));
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          return std::exp(v.mu + v.sigma * rng.normal());
        } else {  // GammaDist
          return rng.gamma(v.shape, v.scale);
        }
      },
      d);
}

namespace {

// E[Y^r] helpers where a smooth transformed integrand exists.
double logitnormal_moment(const LogitNormal& v, int r) {
  auto f = [&](double z) {
    const double p = 1.0 / (1.0 + std::exp(-z));
    return std::pow(p, r) * special::norm_pdf((z - v.mu) / v.sigma) / v.sigma;
  };
  return quad::integrate(f, v.mu - 14.0 * v.sigma, v.mu + 14.0 * v.sigma, 1e-10, 0.0, {v.mu}).value;
}

double logbilal_moment(const LogBilal& v, int r) {
  // Substituting w = y^(1/theta) turns the integrand into a polynomial.
  auto f = [&](double w) { return 6.0 * std::pow(w, v.theta * r + 1.0) * (1.0 - w); };
  return quad::integrate(f, 0.0, 1.0, 1e-12).value;
}

}  // namespace

double mean(const Density& d) {
  return std::visit(
      [&d](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta>) {
          return v.a / (v.a + v.b);
        } else if constexpr (std::is_same_v<T, Beta4P>) {
          return v.lb + (v.ub - v.lb) * v.a / (v.a + v.b);
        } else if constexpr (std::is_same_v<T, LogitNormal>) {
          return logitnormal_moment(v, 1);
        } else if constexpr (std::is_same_v<T, Kumaraswamy>) {
          return v.b * std::exp(special::log_beta(1.0 + 1.0 / v.a, v.b));
        } else if constexpr (std::is_same_v<T, LogBilal>) {
          return logbilal_moment(v, 1);
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          const double za = (v.lb - v.mu) / v.sigma, zb = (v.ub - v.mu) / v.sigma;
          const double Z = special::norm_cdf(zb) - special::norm_cdf(za);
          return v.mu + v.sigma * (special::norm_pdf(za) - special::norm_pdf(zb)) / Z;
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          return std::exp(v.mu + 0.5 * v.sigma * v.sigma);
        } else {  // GammaDist
          return v.shape * v.scale;
        }
        (void)d;
      },
      d);
}

double variance(const Density& d) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Beta>) {
          const double n = v.a + v.b;
          return v.a * v.b / (n * n * (n + 1.0));
        } else if constexpr (std::is_same_v<T, Beta4P>) {
          const double n = v.a + v.b, w = v.ub - v.lb;
          return w * w * v.a * v.b / (n * n * (n + 1.0));
        } else if constexpr (std::is_same_v<T, LogitNormal>) {
          const double m1 = logitnormal_moment(v, 1);
          return logitnormal_moment(v, 2) - m1 * m1;
        } else if constexpr (std::is_same_v<T, Kumaraswamy>) {
          const double m1 = v.b * std::exp(special::log_beta(1.0 + 1.0 / v.a, v.b));
          const double m2 = v.b * std::exp(special::log_beta(1.0 + 2.0 / v.a, v.b));
          return m2 - m1 * m1;
        } else if constexpr (std::is_same_v<T, LogBilal>) {
          const double m1 = logbilal_moment(v, 1);
          return logbilal_moment(v, 2) - m1 * m1;
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          const double za = (v.lb - v.mu) / v.sigma, zb = (v.ub - v.mu) / v.sigma;
          const double Z = special::norm_cdf(zb) - special::norm_cdf(za);
          const double pa = special::norm_pdf(za), pb = special::norm_pdf(zb);
          const double r = (pa - pb) / Z;
          return v.sigma * v.sigma * (1.0 + (za * pa - zb * pb) / Z - r * r);
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          const double s2 = v.sigma * v.sigma;
          return (std::exp(s2) - 1.0) * std::exp(2.0 * v.mu + s2);
        } else {  // GammaDist
          return v.shape * v.scale * v.scale;
        }
      },
      d);
}

double c_factor(double alpha_s, double beta_s) {
  require(alpha_s > 0 && beta_s > 0, ErrorCode::invalid_argument,
          "c_factor: parameters must be positive");
  if (alpha_s < 1.0) {
    return std::pow(beta_s, -alpha_s) * std::exp(1.0 / beta_s) *
           special::upper_incomplete_gamma(1.0 - alpha_s, 1.0 / beta_s);
  }
  // Quadrature of x f_{S*}(x) on (0,1) where S* = (S+1)^-1. Evaluated in log
  // space; the initial grid is seeded at images of Gamma quantile anchors so
  // the peak is visible to the first pass even when it is very narrow.
  const double lg = std::lgamma(alpha_s);
  auto integrand = [&](double x) {
    const double lx = std::log(x);
    const double l1x = std::log1p(-x);
    const double lf = -alpha_s * std::log(beta_s) + (x - 1.0) / (x * beta_s) +
                      (alpha_s - 1.0) * (l1x - lx) - 2.0 * lx - lg;
    return x * std::exp(lf);
  };
  std::vector<double> pts;
  const double sd = std::sqrt(alpha_s) * beta_s;
  for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0, 30.0}) {
    const double s = alpha_s * beta_s + k * sd;
    if (s > 0.0) pts.push_back(1.0 / (1.0 + s));
  }
  return quad::integrate(integrand, 0.0, 1.0, 1e-10, 1e-14, pts).value;
}

SkewNormal::SkewNormal(Eigen::VectorXd location, Eigen::MatrixXd sigma, Eigen::VectorXd delta)
    : mu_(std::move(location)), delta_(std::move(delta)), sigma_(std::move(sigma)) {
  const auto d = mu_.size();
  require(sigma_.rows() == d && sigma_.cols() == d && delta_.size() == d,
          ErrorCode::invalid_argument, "SkewNormal: dimension mismatch");
  require(delta_.allFinite() && mu_.allFinite(), ErrorCode::invalid_argument,
          "SkewNormal: non-finite parameters");
  chol_sigma_.compute(sigma_);
  require(chol_sigma_.info() == Eigen::Success, ErrorCode::invalid_argument,
          "SkewNormal: Sigma is not positive definite");
  const Eigen::MatrixXd omega = sigma_ + delta_ * delta_.transpose();
  chol_omega_.compute(omega);
  require(chol_omega_.info() == Eigen::Success, ErrorCode::invalid_argument,
          "SkewNormal: Omega is not positive definite");
  const Eigen::VectorXd oinv_delta = chol_omega_.solve(delta_);
  const double k = delta_.dot(oinv_delta);
  require(k < 1.0, ErrorCode::invalid_argument, "SkewNormal: invalid skewness");
  eta_ = oinv_delta / std::sqrt(1.0 - k);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(chol_omega_.matrixL()(i, i));
  log_norm_ = std::log(2.0) - 0.5 * d * std::log(2.0 * M_PI) - 0.5 * log_det;
}

Eigen::VectorXd SkewNormal::sample(RngStream& rng) const {
  const double z0 = std::fabs(rng.normal());
  Eigen::VectorXd z(dim());
  for (int i = 0; i < dim(); ++i) z(i) = rng.normal();
  return mu_ + delta_ * z0 + chol_sigma_.matrixL() * z;
}

double SkewNormal::logpdf(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd u = x - mu_;
  const double quad_form = u.dot(chol_omega_.solve(u));
  return log_norm_ - 0.5 * quad_form + special::log_norm_cdf(eta_.dot(u));
}

Eigen::VectorXd SkewNormal::mean() const { return mu_ + std::sqrt(2.0 / M_PI) * delta_; }

Eigen::MatrixXd SkewNormal::covariance() const {
  return sigma_ + (1.0 - 2.0 / M_PI) * delta_ * delta_.transpose();
}

}  // namespace fzr::dists
