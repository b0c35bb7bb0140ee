#ifndef FZR_CORE_MODEL_HPP
#define FZR_CORE_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/dists.hpp"
#include "core/fuzznum.hpp"
#include "core/rng.hpp"

namespace fzr {

enum class Family { beta, logit_normal, kumaraswamy, lognormal, log_bilal, trunc_normal };
enum class Link { logit, log, identity };

Family family_from_string(const std::string& s);
std::string family_to_string(Family f);
Link link_from_string(const std::string& s);
std::string link_to_string(Link l);
Link default_link(Family f);

// Gaussian priors centered at zero: per-coefficient on beta, and on the
// unconstrained dispersion.
struct PriorSpec {
  double beta_sd = 10.0;
  double phi_sd = 5.0;
};

struct ModelSpec {
  Family family = Family::beta;
  Link link = Link::logit;
  double lb = 0.0;
  double ub = 1.0;
  int num_covariates = 1;  // columns of X, intercept included
  PriorSpec prior;

  // LogBilal is a one-parameter family; everything else carries a dispersion.
  bool has_dispersion() const { return family != Family::log_bilal; }
  int theta_dim() const { return num_covariates + (has_dispersion() ? 1 : 0); }
  void validate() const;  // link/family compatibility, lb < ub
};

// Regression parameters: coefficients plus the dispersion on an unconstrained
// scale (exp transform for precisions/scales, logistic for the Kumaraswamy
// quantile-shape). The sampler works on the packed vector form.
struct ThetaY {
  Eigen::VectorXd beta;
  double phi_unc = 0.0;
};

ThetaY theta_from_vector(const ModelSpec& spec, const Eigen::VectorXd& v);
Eigen::VectorXd theta_to_vector(const ModelSpec& spec, const ThetaY& t);
double log_prior(const ModelSpec& spec, const Eigen::VectorXd& theta);

// Fuzziness law parameters, Gamma shape-scale.
struct ThetaS {
  double alpha_s = 1.0;
  double beta_s = 1.0;
};

struct FuzzyObservation {
  double m, s;      // mode and precision
  double lb, ub;    // support of this observation
};

struct FuzzyDataset {
  std::vector<FuzzyObservation> obs;
  Eigen::MatrixXd X;  // n x J, intercept column included
  double lb = 0.0, ub = 1.0;  // model bounds for the latent outcome
  std::vector<std::string> ids;
  std::vector<std::string> covariate_names;
  // Recorded standardization transform (empty when not standardized):
  // x_std = (x - center) / scale per column.
  std::vector<double> standardize_center, standardize_scale;

  int n() const { return static_cast<int>(obs.size()); }
  int num_covariates() const { return static_cast<int>(X.cols()); }
  std::vector<double> precisions() const;
  std::vector<double> modes() const;
  void validate() const;
};

Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta);
double mean_from_eta(double eta, Link link, double lb, double ub);
Eigen::VectorXd mean_from_eta(const Eigen::VectorXd& eta, Link link, double lb, double ub);

// Latent-outcome density for one unit on the model bounds. Wraps the natural
// unit-support density with the affine rescaling when needed; for unbounded
// families the law is restricted to (lb, ub) (sampling by rejection, moments
// by renormalized quadrature).
struct LatentDensity {
  dists::Density base;
  double lb, ub;
  bool rescale;      // base lives on (0,1) and is mapped affinely onto (lb, ub)
  bool restricted;   // base support exceeds (lb, ub)

  double logpdf(double y) const;
  double dlogpdf(double y) const;
  double d2logpdf(double y) const;
  double sample(RngStream& rng) const;
  double mean_restricted() const;
  double variance_restricted() const;
};

// Concrete per-unit distribution parameters from the regression structure.
LatentDensity family_params(const ModelSpec& spec, const ThetaY& theta, double eta_i);

// Two-stage generative draw: y_i from the latent family, s_i from the Gamma
// fuzziness law, m_i | s_i, y_i from the mean-precision four-parameter Beta.
struct SimulationResult {
  FuzzyDataset data;
  Eigen::VectorXd y_latent;
};
SimulationResult simulate(const ModelSpec& spec, const ThetaY& theta_y, const ThetaS& theta_s,
                          const Eigen::MatrixXd& X, RngStream& rng);

// Grand moments of the observed modes implied by the two-stage process:
// E[M] = E[Y] and, on bounds rescaled to (0,1),
// V[M*] = V[Y*](1 - c) + E[Y*](1 - E[Y*]) c with c = c_factor(theta_s).
struct ModeMoments {
  double mean_m, var_m;
  double mean_y, var_y;
  double c;
};
ModeMoments mode_moments(const ModelSpec& spec, const ThetaY& theta_y, const ThetaS& theta_s);

// Envelope of the observation supports: smallest lb, largest ub.
std::pair<double, double> derive_bounds(const std::vector<FuzzyObservation>& obs);
std::pair<double, double> derive_bounds(const std::vector<TrapezoidalFuzzyNumber>& obs);
// 1% relative margin on each side, for unbounded latent families.
std::pair<double, double> widen_bounds(std::pair<double, double> b, double rel_margin = 0.01);

// Fast repeated evaluation of sum_i ln f_Y(y_i | theta) for fixed (X, y):
// the inner loop of the parameter-conditional approximation. Matches
// dists::logpdf through family_params up to y-independent caching.
class LatentLogLik {
public:
  LatentLogLik(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
  double operator()(const Eigen::VectorXd& theta) const;  // includes the log prior

private:
  const ModelSpec spec_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd ys_;          // rescaled to (0,1) where applicable
  Eigen::VectorXd log_ys_, log_1m_ys_, extra_;
  double const_term_ = 0.0;
};

}  // namespace fzr

#endif
