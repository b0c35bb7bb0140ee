#ifndef FZR_CORE_DISTS_HPP
#define FZR_CORE_DISTS_HPP

#include <Eigen/Dense>
#include <variant>

#include "core/rng.hpp"

namespace fzr::dists {

// Families used as latent-outcome models and generative components. Each
// carries validated parameters; log densities return -inf outside the
// support, derivative evaluation requires an interior point.

struct Beta {
  double a, b;
  Beta(double a_, double b_);
};

// Four-parameter Beta: Beta(a, b) affinely mapped onto (lb, ub).
struct Beta4P {
  double a, b, lb, ub;
  Beta4P(double a_, double b_, double lb_, double ub_);
};

struct LogitNormal {
  double mu, sigma;
  LogitNormal(double mu_, double sigma_);
};

struct Kumaraswamy {
  double a, b;
  Kumaraswamy(double a_, double b_);
};

// Unit support; density (6/theta) y^(2/theta - 1) (1 - y^(1/theta)).
struct LogBilal {
  double theta;
  explicit LogBilal(double theta_);
};

struct TruncNormal {
  double lb, ub, mu, sigma;
  TruncNormal(double lb_, double ub_, double mu_, double sigma_);
};

struct Lognormal {
  double mu, sigma;
  Lognormal(double mu_, double sigma_);
};

// Shape-scale throughout.
struct GammaDist {
  double shape, scale;
  GammaDist(double shape_, double scale_);
};

using Density = std::variant<Beta, Beta4P, LogitNormal, Kumaraswamy, LogBilal, TruncNormal,
                             Lognormal, GammaDist>;

struct Support {
  double lo, hi;  // open interval; hi may be +inf
};

Support support(const Density& d);
double logpdf(const Density& d, double y);
double dlogpdf_dy(const Density& d, double y);
double d2logpdf_dy2(const Density& d, double y);
double sample(const Density& d, RngStream& rng);
double mean(const Density& d);
double variance(const Density& d);

inline double sample_beta4p(const Beta4P& d, RngStream& rng) { return sample(Density(d), rng); }
inline double sample_gamma(const GammaDist& d, RngStream& rng) { return sample(Density(d), rng); }

// Scaling factor c = E[(S+1)^-1] for S ~ Gamma(shape alpha_s, scale beta_s).
// Upper-incomplete-gamma closed form for alpha_s < 1, adaptive quadrature of
// the shifted-inverse-Gamma density otherwise; the two agree on the overlap.
double c_factor(double alpha_s, double beta_s);

// Multivariate skew normal in the additive parametrization:
//   X = location + delta |Z0| + L Z,  Z0 ~ N(0,1),  Z ~ N(0, I),  L L' = Sigma.
// Density 2 phi_d(x; location, Omega) Phi(eta'(x - location)), Omega = Sigma + delta delta'.
class SkewNormal {
public:
  SkewNormal(Eigen::VectorXd location, Eigen::MatrixXd sigma, Eigen::VectorXd delta);

  int dim() const { return static_cast<int>(mu_.size()); }
  const Eigen::VectorXd& location() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::VectorXd& delta() const { return delta_; }

  Eigen::VectorXd sample(RngStream& rng) const;
  double logpdf(const Eigen::VectorXd& x) const;

  Eigen::VectorXd mean() const;        // location + sqrt(2/pi) delta
  Eigen::MatrixXd covariance() const;  // Sigma + (1 - 2/pi) delta delta'

private:
  Eigen::VectorXd mu_, delta_, eta_;
  Eigen::MatrixXd sigma_;
  Eigen::LLT<Eigen::MatrixXd> chol_sigma_, chol_omega_;
  double log_norm_;
};

}  // namespace fzr::dists

#endif
