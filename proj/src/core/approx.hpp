#ifndef FZR_CORE_APPROX_HPP
#define FZR_CORE_APPROX_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "core/dists.hpp"
#include "core/model.hpp"
#include "core/rng.hpp"

namespace fzr::approx {

// Four-parameter Beta proposal for the latent-outcome conditional, in the
// mean-precision parametrization on the rescaled unit interval: shapes are
// (lambda_hat * sigma_hat, sigma_hat - lambda_hat * sigma_hat).
struct B4PProposal {
  double lambda_hat = 0.5;
  double sigma_hat = 1.0;
  int iterations = 0;
  bool converged = false;
  bool fallback = false;  // Laplace-style fit was substituted
};

// Unnormalized log conditional of the latent outcome given one fuzzy
// observation (m, s): the mode-likelihood kernel plus the latent log density,
// both on the original scale. -inf outside (lb, ub).
double log_unnorm_posterior_y(double y, double m, double s, const LatentDensity& target);

// Derivative-matched fit of the proposal: fixed-point recursion on
// (lambda, sigma) matching first and second derivatives of the log target at
// the current location, started from the observed rescaled mode and
// precision. Out-of-domain updates are damped toward the previous iterate;
// after max_iter the proposal is replaced by a mode/curvature (Laplace) fit
// and flagged. Throws when even the damped update cannot stay in the domain.
B4PProposal fit_b4p(double m, double s, const LatentDensity& target, double eps = 1e-6,
                    int max_iter = 200);

double sample_y_conditional(const B4PProposal& prop, double lb, double ub, RngStream& rng);

// Third-order skew-normal approximation of a log posterior: matches the mode,
// the negative Hessian at the mode, and the unmixed third derivatives at the
// mode. Derivatives are taken by central finite differences.
struct SNApprox {
  Eigen::VectorXd mode;           // matched posterior mode
  dists::SkewNormal dist;         // fitted distribution (location, Sigma, delta)
  double t_mode = 0.0;            // skewing variable at the mode (solver state)
  int iterations = 0;
  bool delta_zero_fallback = false;  // fell back to the Gaussian (Laplace) fit
};

SNApprox fit_skewnormal(const std::function<double(const Eigen::VectorXd&)>& log_post,
                        const Eigen::VectorXd& theta_init);

Eigen::VectorXd sample_theta_conditional(const SNApprox& approx, RngStream& rng);

// Quasi-Newton maximizer with finite-difference gradients (shared by the
// skew-normal fit; exposed for reuse and testing).
struct MaximizeResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};
MaximizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, int max_iter = 400, double grad_tol = 1e-7);

}  // namespace fzr::approx

#endif
