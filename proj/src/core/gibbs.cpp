#include "core/gibbs.hpp"

#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <optional>
#include <thread>

#include "core/approx.hpp"
#include "core/errors.hpp"
#include "core/special.hpp"

namespace fzr {

void SamplerConfig::validate() const {
  require(chains >= 1, ErrorCode::invalid_argument, "sampler: chains >= 1");
  require(samples >= 1, ErrorCode::invalid_argument, "sampler: samples >= 1");
  require(burnin >= 0, ErrorCode::invalid_argument, "sampler: burnin >= 0");
  require(eps > 0, ErrorCode::invalid_argument, "sampler: eps > 0");
  require(sn_refresh >= 1, ErrorCode::invalid_argument, "sampler: sn_refresh >= 1");
}

ThetaS gamma_mle(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  require(n >= 2, ErrorCode::invalid_argument, "gamma_mle: need at least two values");
  double sum = 0.0, sum_log = 0.0;
  for (double v : s) {
    require(v > 0.0 && std::isfinite(v), ErrorCode::invalid_argument,
            "gamma_mle: values must be positive");
    sum += v;
    sum_log += std::log(v);
  }
  const double mean = sum / n;
  const double delta = std::log(mean) - sum_log / n;  // >= 0 by Jensen
  require(delta > 1e-14, ErrorCode::invalid_argument,
          "gamma_mle: degenerate sample (all values equal)");
  double alpha = (3.0 - delta + std::sqrt((delta - 3.0) * (delta - 3.0) + 24.0 * delta)) /
                 (12.0 * delta);
  // Newton on g(a) = ln a - digamma(a) - delta.
  bool ok = false;
  for (int it = 0; it < 100; ++it) {
    const double g = std::log(alpha) - special::digamma(alpha) - delta;
    const double dg = 1.0 / alpha - special::trigamma(alpha);
    const double step = g / dg;
    alpha -= step;
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw Error(ErrorCode::numeric, "gamma_mle: Newton iteration left the domain");
    if (std::fabs(step) < 1e-13 * (1.0 + alpha)) {
      ok = true;
      break;
    }
  }
  require(ok, ErrorCode::numeric, "gamma_mle: Newton did not converge");
  return {alpha, mean / alpha};
}

namespace {

// Rolling failure monitor over recent unit updates.
class FailureWindow {
public:
  explicit FailureWindow(int size) : size_(std::max(size, 400)) {}
  void push(bool failed) {
    buf_.push_back(failed);
    if (failed) ++count_;
    if (static_cast<int>(buf_.size()) > size_) {
      if (buf_.front()) --count_;
      buf_.pop_front();
    }
  }
  bool tripped() const {
    return static_cast<int>(buf_.size()) >= size_ && count_ > 0.05 * buf_.size();
  }
  int count() const { return count_; }

private:
  int size_;
  int count_ = 0;
  std::deque<bool> buf_;
};

}  // namespace

ChainDraws run_chain(const FuzzyDataset& data, const ModelSpec& spec, const SamplerConfig& cfg,
                     int chain_id) {
  cfg.validate();
  spec.validate();
  data.validate();
  require(data.num_covariates() == spec.num_covariates, ErrorCode::invalid_argument,
          "run_chain: design width does not match the model");

  const int n = data.n();
  const int dim = spec.theta_dim();
  const double w = spec.ub - spec.lb;

  RngStream rng = RngStream(cfg.seed).substream(0xC4A1, static_cast<std::uint64_t>(chain_id));

  ChainDraws out;
  out.chain_id = chain_id;
  out.seed = rng.key();
  out.theta.resize(cfg.samples, dim);
  if (cfg.keep_latent) out.y_latent.resize(cfg.samples, n);

  // Fuzziness-law parameters once per run; the latent and parameter updates
  // never revisit them.
  out.theta_s = gamma_mle(data.precisions());

  // Start at the prior center with a small jitter; latent values at the
  // observed modes.
  Eigen::VectorXd theta(dim);
  for (int j = 0; j < dim; ++j) theta(j) = 0.1 * rng.normal();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i)
    y(i) = std::clamp(data.obs[i].m, spec.lb + 1e-10 * w, spec.ub - 1e-10 * w);

  FailureWindow window(20 * n);
  std::optional<approx::SNApprox> sn;
  long mh_accepts = 0, mh_total = 0;

  const int total_iters = cfg.burnin + cfg.samples;
  for (int t = 0; t < total_iters; ++t) {
    // Latent step: unit-wise proposal fit and draw.
    const ThetaY th = theta_from_vector(spec, theta);
    const Eigen::VectorXd eta = linear_predictor(data.X, th.beta);
    for (int i = 0; i < n; ++i) {
      bool failed = false;
      try {
        const LatentDensity target = family_params(spec, th, eta(i));
        const approx::B4PProposal prop =
            approx::fit_b4p(data.obs[i].m, data.obs[i].s, target, cfg.eps);
        if (prop.fallback) {
          ++out.b4p_fallback_count;
          failed = true;
        }
        y(i) = approx::sample_y_conditional(prop, spec.lb, spec.ub, rng);
      } catch (const Error&) {
        ++out.b4p_error_count;
        failed = true;  // keep the previous latent value
      }
      window.push(failed);
    }
    if (window.tripped())
      throw Error(ErrorCode::numeric,
                  "run_chain: approximation failure rate above 5% in the last window (" +
                      std::to_string(window.count()) + " failures); chain " +
                      std::to_string(chain_id) + " aborted at iteration " + std::to_string(t));

    // Parameter step: skew-normal approximation of the conditional.
    const LatentLogLik log_post(spec, data.X, y);
    auto log_post_fn = [&](const Eigen::VectorXd& v) { return log_post(v); };
    if (!sn || t % cfg.sn_refresh == 0) {
      sn = approx::fit_skewnormal(log_post_fn, theta);
    }
    const Eigen::VectorXd proposal = approx::sample_theta_conditional(*sn, rng);
    if (cfg.mh_correct) {
      // The target changes with the latent state, so the current value is
      // re-evaluated under this iteration's conditional.
      const double lp_prop = log_post(proposal);
      const double lp_cur = log_post(theta);
      const double lq_prop = sn->dist.logpdf(proposal);
      const double lq_cur = sn->dist.logpdf(theta);
      const double log_ratio = (lp_prop - lp_cur) - (lq_prop - lq_cur);
      ++mh_total;
      if (std::log(rng.uniform() + 1e-300) < log_ratio) {
        theta = proposal;
        ++mh_accepts;
      }
    } else {
      theta = proposal;
    }

    if (t >= cfg.burnin) {
      const int r = t - cfg.burnin;
      out.theta.row(r) = theta.transpose();
      if (cfg.keep_latent) out.y_latent.row(r) = y.transpose();
    }
  }
  out.mh_accept_rate = cfg.mh_correct && mh_total > 0
                           ? static_cast<double>(mh_accepts) / static_cast<double>(mh_total)
                           : 1.0;
  return out;
}

std::vector<ChainDraws> run_chains(const FuzzyDataset& data, const ModelSpec& spec,
                                   const SamplerConfig& cfg) {
  cfg.validate();
  const int nthreads = cfg.threads > 0
                           ? cfg.threads
                           : std::max(1u, std::thread::hardware_concurrency());
  std::vector<ChainDraws> out(cfg.chains);
  if (nthreads <= 1 || cfg.chains == 1) {
    for (int c = 0; c < cfg.chains; ++c) out[c] = run_chain(data, spec, cfg, c);
    return out;
  }
  std::vector<std::future<ChainDraws>> futures;
  futures.reserve(cfg.chains);
  for (int c = 0; c < cfg.chains; ++c)
    futures.push_back(std::async(std::launch::async,
                                 [&, c] { return run_chain(data, spec, cfg, c); }));
  for (int c = 0; c < cfg.chains; ++c) out[c] = futures[c].get();
  return out;
}

}  // namespace fzr
