#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace fzr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLnSqrt2Pi = 0.9189385332046727;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
}  // namespace

Family family_from_string(const std::string& s) {
  if (s == "beta") return Family::beta;
  if (s == "logit-normal" || s == "logitnormal") return Family::logit_normal;
  if (s == "kumaraswamy") return Family::kumaraswamy;
  if (s == "lognormal") return Family::lognormal;
  if (s == "log-bilal" || s == "logbilal") return Family::log_bilal;
  if (s == "truncated-normal" || s == "truncnormal") return Family::trunc_normal;
  throw Error(ErrorCode::invalid_argument, "unknown family: " + s);
}

std::string family_to_string(Family f) {
  switch (f) {
    case Family::beta: return "beta";
    case Family::logit_normal: return "logit-normal";
    case Family::kumaraswamy: return "kumaraswamy";
    case Family::lognormal: return "lognormal";
    case Family::log_bilal: return "log-bilal";
    case Family::trunc_normal: return "truncated-normal";
  }
  return "?";
}

Link link_from_string(const std::string& s) {
  if (s == "logit") return Link::logit;
  if (s == "log") return Link::log;
  if (s == "identity") return Link::identity;
  throw Error(ErrorCode::invalid_argument, "unknown link: " + s);
}

std::string link_to_string(Link l) {
  switch (l) {
    case Link::logit: return "logit";
    case Link::log: return "log";
    case Link::identity: return "identity";
  }
  return "?";
}

Link default_link(Family f) {
  switch (f) {
    case Family::lognormal:
    case Family::trunc_normal: return Link::identity;
    default: return Link::logit;
  }
}

void ModelSpec::validate() const {
  require(std::isfinite(lb) && std::isfinite(ub) && lb < ub, ErrorCode::invalid_argument,
          "model: need lb < ub");
  require(num_covariates >= 1, ErrorCode::invalid_argument, "model: need at least the intercept");
  require(prior.beta_sd > 0 && prior.phi_sd > 0, ErrorCode::invalid_argument,
          "model: prior sds must be positive");
  const bool ok = [&] {
    switch (family) {
      case Family::beta:
      case Family::logit_normal:
      case Family::kumaraswamy:
      case Family::log_bilal: return link == Link::logit;
      case Family::lognormal: return link == Link::identity;
      case Family::trunc_normal: return link == Link::identity || link == Link::logit;
    }
    return false;
  }();
  require(ok, ErrorCode::invalid_argument, "model: link " + link_to_string(link) +
                                               " incompatible with family " + family_to_string(family));
}

ThetaY theta_from_vector(const ModelSpec& spec, const Eigen::VectorXd& v) {
  require(v.size() == spec.theta_dim(), ErrorCode::invalid_argument,
          "theta vector has wrong dimension");
  ThetaY t;
  t.beta = v.head(spec.num_covariates);
  t.phi_unc = spec.has_dispersion() ? v(spec.num_covariates) : 0.0;
  return t;
}

Eigen::VectorXd theta_to_vector(const ModelSpec& spec, const ThetaY& t) {
  require(t.beta.size() == spec.num_covariates, ErrorCode::invalid_argument,
          "beta has wrong dimension");
  Eigen::VectorXd v(spec.theta_dim());
  v.head(spec.num_covariates) = t.beta;
  if (spec.has_dispersion()) v(spec.num_covariates) = t.phi_unc;
  return v;
}

double log_prior(const ModelSpec& spec, const Eigen::VectorXd& theta) {
  double lp = 0.0;
  for (int j = 0; j < spec.num_covariates; ++j) {
    const double z = theta(j) / spec.prior.beta_sd;
    lp += -0.5 * z * z - std::log(spec.prior.beta_sd) - kLnSqrt2Pi;
  }
  if (spec.has_dispersion()) {
    const double z = theta(spec.num_covariates) / spec.prior.phi_sd;
    lp += -0.5 * z * z - std::log(spec.prior.phi_sd) - kLnSqrt2Pi;
  }
  return lp;
}

std::vector<double> FuzzyDataset::precisions() const {
  std::vector<double> out(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) out[i] = obs[i].s;
  return out;
}

std::vector<double> FuzzyDataset::modes() const {
  std::vector<double> out(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) out[i] = obs[i].m;
  return out;
}

void FuzzyDataset::validate() const {
  require(!obs.empty(), ErrorCode::invalid_argument, "dataset: no observations");
  require(X.rows() == static_cast<Eigen::Index>(obs.size()), ErrorCode::invalid_argument,
          "dataset: X rows do not match observation count");
  require(X.allFinite(), ErrorCode::invalid_argument, "dataset: non-finite covariate entries");
  require(lb < ub, ErrorCode::invalid_argument, "dataset: need lb < ub");
  for (size_t i = 0; i < obs.size(); ++i) {
    require(obs[i].m > lb && obs[i].m < ub, ErrorCode::invalid_argument,
            "dataset: mode outside the model bounds at row " + std::to_string(i + 1));
    require(obs[i].s > 0, ErrorCode::invalid_argument,
            "dataset: non-positive precision at row " + std::to_string(i + 1));
  }
}

Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta) {
  require(X.cols() == beta.size(), ErrorCode::invalid_argument,
          "linear_predictor: dimension mismatch");
  return X * beta;
}

double mean_from_eta(double eta, Link link, double lb, double ub) {
  switch (link) {
    case Link::logit: return lb + (ub - lb) * logistic(eta);
    case Link::log: return std::exp(eta);
    case Link::identity: return eta;
  }
  return eta;
}

Eigen::VectorXd mean_from_eta(const Eigen::VectorXd& eta, Link link, double lb, double ub) {
  Eigen::VectorXd out(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) out(i) = mean_from_eta(eta(i), link, lb, ub);
  return out;
}

double LatentDensity::logpdf(double y) const {
  if (restricted && !(y > lb && y < ub)) return -kInf;
  if (!rescale) return dists::logpdf(base, y);
  const double w = ub - lb;
  return dists::logpdf(base, (y - lb) / w) - std::log(w);
}

double LatentDensity::dlogpdf(double y) const {
  if (!rescale) return dists::dlogpdf_dy(base, y);
  const double w = ub - lb;
  return dists::dlogpdf_dy(base, (y - lb) / w) / w;
}

double LatentDensity::d2logpdf(double y) const {
  if (!rescale) return dists::d2logpdf_dy2(base, y);
  const double w = ub - lb;
  return dists::d2logpdf_dy2(base, (y - lb) / w) / (w * w);
}

double LatentDensity::sample(RngStream& rng) const {
  if (!restricted) {
    if (!rescale) return dists::sample(base, rng);
    return lb + (ub - lb) * dists::sample(base, rng);
  }
  for (int tries = 0; tries < 100000; ++tries) {
    const double y = dists::sample(base, rng);
    if (y > lb && y < ub) return y;
  }
  throw Error(ErrorCode::numeric, "latent sample: rejection step exhausted (bounds too tight?)");
}

double LatentDensity::mean_restricted() const {
  if (!restricted) {
    if (!rescale) return dists::mean(base);
    return lb + (ub - lb) * dists::mean(base);
  }
  const double lo = std::max(lb, dists::support(base).lo);
  auto f0 = [&](double y) { return std::exp(dists::logpdf(base, y)); };
  auto f1 = [&](double y) { return y * std::exp(dists::logpdf(base, y)); };
  const std::vector<double> pts{dists::mean(base)};
  const double z = quad::integrate(f0, lo, ub, 1e-10, 0.0, pts).value;
  return quad::integrate(f1, lo, ub, 1e-10, 0.0, pts).value / z;
}

double LatentDensity::variance_restricted() const {
  if (!restricted) {
    if (!rescale) return dists::variance(base);
    const double w = ub - lb;
    return w * w * dists::variance(base);
  }
  const double lo = std::max(lb, dists::support(base).lo);
  auto f0 = [&](double y) { return std::exp(dists::logpdf(base, y)); };
  auto f1 = [&](double y) { return y * std::exp(dists::logpdf(base, y)); };
  auto f2 = [&](double y) { return y * y * std::exp(dists::logpdf(base, y)); };
  const std::vector<double> pts{dists::mean(base)};
  const double z = quad::integrate(f0, lo, ub, 1e-10, 0.0, pts).value;
  const double m1 = quad::integrate(f1, lo, ub, 1e-10, 0.0, pts).value / z;
  const double m2 = quad::integrate(f2, lo, ub, 1e-10, 0.0, pts).value / z;
  return m2 - m1 * m1;
}

LatentDensity family_params(const ModelSpec& spec, const ThetaY& theta, double eta_i) {
  const double w = spec.ub - spec.lb;
  const bool unit_bounds = spec.lb == 0.0 && spec.ub == 1.0;
  switch (spec.family) {
    case Family::beta: {
      const double mu = logistic(eta_i);
      const double phi = std::exp(theta.phi_unc);
      require(mu > 0.0 && mu < 1.0 && phi > 0.0 && phi * (1.0 - mu) > 0.0 && mu * phi > 0.0,
              ErrorCode::invalid_argument, "beta family: parameters left the legal domain");
      return {dists::Density(dists::Beta4P(mu * phi, phi - phi * mu, spec.lb, spec.ub)),
              spec.lb, spec.ub, false, false};
    }
    case Family::logit_normal: {
      const double sigma = std::exp(theta.phi_unc);
      return {dists::Density(dists::LogitNormal(eta_i, sigma)), spec.lb, spec.ub, !unit_bounds,
              false};
    }
    case Family::kumaraswamy: {
      // Quantile parametrization: the median equals the inverse-logit of eta.
      const double nu = logistic(theta.phi_unc);
      const double a_num = -std::log1p(-std::pow(0.5, nu));
      const double sp = softplus(-eta_i);  // -log(median)
      require(sp > 0.0, ErrorCode::invalid_argument, "kumaraswamy: eta too large");
      const double a = a_num / sp;
      require(a > 0.0 && std::isfinite(a), ErrorCode::invalid_argument,
              "kumaraswamy: shape left the legal domain");
      return {dists::Density(dists::Kumaraswamy(a, 1.0 / nu)), spec.lb, spec.ub, !unit_bounds,
              false};
    }
    case Family::lognormal: {
      const double sigma = std::exp(theta.phi_unc);
      return {dists::Density(dists::Lognormal(eta_i, sigma)), spec.lb, spec.ub, false, true};
    }
    case Family::log_bilal: {
      const double mu = logistic(eta_i);
      require(mu > 0.0 && mu < 1.0, ErrorCode::invalid_argument, "log-bilal: mean out of range");
      // Mean parametrization: E[Y*] = 6/((th+2)(th+3)) inverted for th.
      const double th = 0.5 * (-5.0 + std::sqrt(1.0 + 24.0 / mu));
      require(th > 0.0 && std::isfinite(th), ErrorCode::invalid_argument,
              "log-bilal: theta left the legal domain");
      return {dists::Density(dists::LogBilal(th)), spec.lb, spec.ub, !unit_bounds, false};
    }
    case Family::trunc_normal: {
      const double loc = mean_from_eta(eta_i, spec.link, spec.lb, spec.ub);
      const double sigma = std::exp(theta.phi_unc);
      return {dists::Density(dists::TruncNormal(spec.lb, spec.ub, loc, sigma)), spec.lb, spec.ub,
              false, false};
    }
  }
  throw Error(ErrorCode::internal, "family_params: unreachable");
}

SimulationResult simulate(const ModelSpec& spec, const ThetaY& theta_y, const ThetaS& theta_s,
                          const Eigen::MatrixXd& X, RngStream& rng) {
  spec.validate();
  require(X.cols() == spec.num_covariates, ErrorCode::invalid_argument,
          "simulate: X has wrong number of columns");
  const int n = static_cast<int>(X.rows());
  require(n >= 1, ErrorCode::invalid_argument, "simulate: empty design");
  const Eigen::VectorXd eta = linear_predictor(X, theta_y.beta);
  const double w = spec.ub - spec.lb;

  SimulationResult out;
  out.y_latent.resize(n);
  out.data.obs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const LatentDensity den = family_params(spec, theta_y, eta(i));
    const double y = den.sample(rng);
    const double ystar = std::clamp((y - spec.lb) / w, 1e-12, 1.0 - 1e-12);
    const double s = rng.gamma(theta_s.alpha_s, theta_s.beta_s);
    const double mstar = rng.beta(s * ystar, s - s * ystar);
    const double m = spec.lb + w * std::clamp(mstar, 1e-12, 1.0 - 1e-12);
    out.y_latent(i) = y;
    out.data.obs.push_back({m, s, spec.lb, spec.ub});
  }
  out.data.X = X;
  out.data.lb = spec.lb;
  out.data.ub = spec.ub;
  out.data.ids.resize(n);
  for (int i = 0; i < n; ++i) out.data.ids[i] = std::to_string(i + 1);
  out.data.covariate_names.resize(X.cols());
  out.data.covariate_names[0] = "intercept";
  for (int j = 1; j < X.cols(); ++j) out.data.covariate_names[j] = "x" + std::to_string(j);
  return out;
}

ModeMoments mode_moments(const LatentDensity& den, const ThetaS& theta_s) {
  const double w = den.ub - den.lb;
  const double ey = den.mean_restricted();
  const double vy = den.variance_restricted();
  const double c = dists::c_factor(theta_s.alpha_s, theta_s.beta_s);
  const double es = (ey - den.lb) / w;
  const double vs = vy / (w * w);
  const double vm_star = vs * (1.0 - c) + es * (1.0 - es) * c;
  return {ey, w * w * vm_star, ey, vy, c};
}

ModeMoments mode_moments(const ModelSpec& spec, const ThetaY& theta_y, const ThetaS& theta_s) {
  require(theta_y.beta.size() >= 1, ErrorCode::invalid_argument, "mode_moments: empty beta");
  const LatentDensity den = family_params(spec, theta_y, theta_y.beta(0));
  return mode_moments(den, theta_s);
}

std::pair<double, double> derive_bounds(const std::vector<FuzzyObservation>& obs) {
  require(!obs.empty(), ErrorCode::invalid_argument, "derive_bounds: empty input");
  double lo = kInf, hi = -kInf;
  for (const auto& o : obs) {
    lo = std::min(lo, o.lb);
    hi = std::max(hi, o.ub);
  }
  return {lo, hi};
}

std::pair<double, double> derive_bounds(const std::vector<TrapezoidalFuzzyNumber>& obs) {
  require(!obs.empty(), ErrorCode::invalid_argument, "derive_bounds: empty input");
  double lo = kInf, hi = -kInf;
  for (const auto& o : obs) {
    lo = std::min(lo, o.a1);
    hi = std::max(hi, o.a4);
  }
  return {lo, hi};
}

std::pair<double, double> widen_bounds(std::pair<double, double> b, double rel_margin) {
  const double w = b.second - b.first;
  return {b.first - rel_margin * w, b.second + rel_margin * w};
}

LatentLogLik::LatentLogLik(const ModelSpec& spec, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& y)
    : spec_(spec), X_(X) {
  const int n = static_cast<int>(y.size());
  require(X.rows() == n, ErrorCode::invalid_argument, "loglik: dimension mismatch");
  const double w = spec.ub - spec.lb;
  ys_.resize(n);
  log_ys_.resize(n);
  log_1m_ys_.resize(n);
  extra_.resize(n);
  const double log_w = std::log(w);
  switch (spec_.family) {
    case Family::beta:
    case Family::kumaraswamy:
    case Family::log_bilal:
      for (int i = 0; i < n; ++i) {
        ys_(i) = (y(i) - spec.lb) / w;
        log_ys_(i) = std::log(ys_(i));
        log_1m_ys_(i) = std::log1p(-ys_(i));
      }
      const_term_ = -n * log_w;
      break;
    case Family::logit_normal:
      for (int i = 0; i < n; ++i) {
        ys_(i) = (y(i) - spec.lb) / w;
        log_ys_(i) = std::log(ys_(i));
        log_1m_ys_(i) = std::log1p(-ys_(i));
        extra_(i) = log_ys_(i) - log_1m_ys_(i);  // logit
        const_term_ -= log_ys_(i) + log_1m_ys_(i);
      }
      const_term_ -= n * (log_w + kLnSqrt2Pi);
      break;
    case Family::lognormal:
      for (int i = 0; i < n; ++i) {
        ys_(i) = y(i);
        extra_(i) = std::log(y(i));
        const_term_ -= extra_(i);
      }
      const_term_ -= n * kLnSqrt2Pi;
      break;
    case Family::trunc_normal:
      ys_ = y;
      const_term_ = -n * kLnSqrt2Pi;
      break;
  }
}

double LatentLogLik::operator()(const Eigen::VectorXd& theta) const {
  const int n = static_cast<int>(ys_.size());
  const int J = spec_.num_covariates;
  const Eigen::VectorXd eta = X_ * theta.head(J);
  const double phi_unc = spec_.has_dispersion() ? theta(J) : 0.0;
  double ll = const_term_;
  switch (spec_.family) {
    case Family::beta: {
      const double phi = std::exp(phi_unc);
      for (int i = 0; i < n; ++i) {
        const double mu = logistic(eta(i));
        const double a = mu * phi, b = phi - mu * phi;
        if (!(a > 0.0) || !(b > 0.0)) return -kInf;
        ll += (a - 1.0) * log_ys_(i) + (b - 1.0) * log_1m_ys_(i) - std::lgamma(a) - std::lgamma(b);
      }
      ll += n * std::lgamma(phi);
      break;
    }
    case Family::logit_normal: {
      const double sigma = std::exp(phi_unc);
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = extra_(i) - eta(i);
        acc += d * d;
      }
      ll += -n * phi_unc - 0.5 * acc / (sigma * sigma);
      break;
    }
    case Family::kumaraswamy: {
      const double nu = logistic(phi_unc);
      if (!(nu > 0.0 && nu < 1.0)) return -kInf;
      const double b = 1.0 / nu;
      const double a_num = -std::log1p(-std::pow(0.5, nu));
      for (int i = 0; i < n; ++i) {
        const double sp = softplus(-eta(i));
        const double a = a_num / sp;
        if (!(a > 0.0) || !std::isfinite(a)) return -kInf;
        const double t = a * log_ys_(i);  // log(y^a) < 0
        const double l1m = t > -1e-12 ? -kInf : std::log1p(-std::exp(t));
        ll += std::log(a) + std::log(b) + (a - 1.0) * log_ys_(i) + (b - 1.0) * l1m;
      }
      break;
    }
    case Family::lognormal: {
      const double sigma = std::exp(phi_unc);
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = extra_(i) - eta(i);
        acc += d * d;
      }
      ll += -n * phi_unc - 0.5 * acc / (sigma * sigma);
      break;
    }
    case Family::log_bilal: {
      for (int i = 0; i < n; ++i) {
        const double mu = logistic(eta(i));
        if (!(mu > 0.0 && mu < 1.0)) return -kInf;
        const double th = 0.5 * (-5.0 + std::sqrt(1.0 + 24.0 / mu));
        if (!(th > 0.0) || !std::isfinite(th)) return -kInf;
        const double t = log_ys_(i) / th;
        const double l1m = t > -1e-12 ? -kInf : std::log1p(-std::exp(t));
        ll += std::log(6.0 / th) + (2.0 / th - 1.0) * log_ys_(i) + l1m;
      }
      break;
    }
    case Family::trunc_normal: {
      const double sigma = std::exp(phi_unc);
      for (int i = 0; i < n; ++i) {
        const double loc = mean_from_eta(eta(i), spec_.link, spec_.lb, spec_.ub);
        const double z = (ys_(i) - loc) / sigma;
        const double za = (spec_.lb - loc) / sigma;
        const double zb = (spec_.ub - loc) / sigma;
        const double Z = special::norm_cdf(zb) - special::norm_cdf(za);
        if (!(Z > 0.0)) return -kInf;
        ll += -0.5 * z * z - phi_unc - std::log(Z);
      }
      break;
    }
  }
  if (std::isnan(ll)) return -kInf;
  return ll + log_prior(spec_, theta);
}

}  // namespace fzr
