#ifndef FZR_CORE_GIBBS_HPP
#define FZR_CORE_GIBBS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/model.hpp"

namespace fzr {

struct SamplerConfig {
  int chains = 5;
  int samples = 4000;  // retained per chain, after burn-in
  int burnin = 2000;
  std::uint64_t seed = 1;
  double eps = 1e-6;      // proposal-fit stopping threshold
  bool mh_correct = false;
  int sn_refresh = 1;     // refit the parameter approximation every k iterations
  bool keep_latent = true;
  int threads = 0;        // 0 = hardware concurrency

  void validate() const;
};

struct ChainDraws {
  Eigen::MatrixXd theta;     // samples x theta_dim
  Eigen::MatrixXd y_latent;  // samples x n, empty when keep_latent is off
  ThetaS theta_s;            // Gamma MLE of the precisions, fixed for the run
  int chain_id = 0;
  std::uint64_t seed = 0;
  int b4p_fallback_count = 0;  // proposal fits that used the mode/curvature fallback
  int b4p_error_count = 0;     // unit updates that kept the previous latent value
  double mh_accept_rate = 1.0; // 1 when sampling the approximation directly
};

// Maximum-likelihood Gamma(shape, scale) fit: shape solves
// ln(a) - digamma(a) = ln(mean) - mean(ln), scale = mean/shape.
ThetaS gamma_mle(const std::vector<double>& s);

ChainDraws run_chain(const FuzzyDataset& data, const ModelSpec& spec, const SamplerConfig& cfg,
                     int chain_id);

// Independent chains with substreams derived from the master seed; order of
// results is stable regardless of the execution schedule.
std::vector<ChainDraws> run_chains(const FuzzyDataset& data, const ModelSpec& spec,
                                   const SamplerConfig& cfg);

}  // namespace fzr

#endif
