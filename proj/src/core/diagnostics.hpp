#ifndef FZR_CORE_DIAGNOSTICS_HPP
#define FZR_CORE_DIAGNOSTICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "core/gibbs.hpp"
#include "core/model.hpp"

namespace fzr::diag {

// Potential scale reduction on rank-normalized split chains. Chains that are
// exactly identical elementwise have zero between-chain variance and report
// 1 exactly.
double rhat(const std::vector<std::vector<double>>& chains);

enum class EssMode { bulk, tail };

// Effective sample size on split chains with Geyer's initial monotone
// sequence. Bulk uses rank-normalized draws; tail is the minimum over the
// 5% and 95% quantile-indicator chains.
double ess(const std::vector<std::vector<double>>& chains, EssMode mode);

// Shortest interval containing ceil(mass * n) sorted draws.
Interval hpdi(std::vector<double> draws, double mass);

enum class WaicMode { conditional, marginal };

// -2 (lppd - p_waic) from a draws x units pointwise log-likelihood matrix.
double waic(const Eigen::MatrixXd& loglik);

// Pointwise log likelihood of the observed modes. Conditional mode evaluates
// at the stored latent draws; marginal mode integrates the latent outcome by
// fresh Monte Carlo draws from the fitted family.
Eigen::MatrixXd pointwise_loglik(const std::vector<ChainDraws>& chains, const FuzzyDataset& data,
                                 const ModelSpec& spec, WaicMode mode, RngStream& rng,
                                 int marginal_draws = 32);

// Integral probability metrics between two densities on a common support.
double tv_distance(const std::function<double(double)>& f, const std::function<double(double)>& g,
                   Interval support, const std::vector<double>& breakpoints = {});
double hellinger(const std::function<double(double)>& f, const std::function<double(double)>& g,
                 Interval support, const std::vector<double>& breakpoints = {});

struct PosteriorSummary {
  std::string name;
  double mean, sd, hpdi_lo, hpdi_hi, rhat, ess_bulk, ess_tail;
};

std::vector<PosteriorSummary> summarize(const std::vector<ChainDraws>& chains,
                                        const std::vector<std::string>& names);

// Posterior predictive check over three fuzzy summary statistics.
struct PPCStatReport {
  std::string name;
  std::vector<double> observed, q_min, q1, q3, q_max;  // per unit
  double cp = 0.0;  // share of units inside the central 95% predictive interval
  double bp = 0.0;  // |2 p - 1| with p the mean upper-tail probability (ties split)
};

struct PPCReport {
  int replicates = 0;
  std::vector<PPCStatReport> stats;  // centroid, support-width, kaufman
};

PPCReport ppc(const std::vector<ChainDraws>& chains, const FuzzyDataset& data,
              const ModelSpec& spec, const ThetaS& theta_s, int replicates, RngStream& rng);

}  // namespace fzr::diag

#endif
