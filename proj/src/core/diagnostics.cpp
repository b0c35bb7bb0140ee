#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace fzr::diag {

namespace {

using Chains = std::vector<std::vector<double>>;

// Halve every chain; odd lengths drop the middle element.
Chains split_chains(const Chains& chains) {
  Chains out;
  out.reserve(2 * chains.size());
  for (const auto& c : chains) {
    const size_t half = c.size() / 2;
    out.emplace_back(c.begin(), c.begin() + half);
    out.emplace_back(c.end() - half, c.end());
  }
  return out;
}

// Pooled average ranks mapped through the normal quantile function
// (offset (r - 3/8)/(S + 1/4)).
Chains rank_normalize(const Chains& chains) {
  size_t total = 0;
  for (const auto& c : chains) total += c.size();
  std::vector<std::pair<double, size_t>> pool;
  pool.reserve(total);
  size_t idx = 0;
  for (const auto& c : chains)
    for (double v : c) pool.emplace_back(v, idx++);
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> rank(total);
  size_t i = 0;
  while (i < total) {
    size_t j = i;
    while (j + 1 < total && pool[j + 1].first == pool[i].first) ++j;
    const double avg = 0.5 * (i + j) + 1.0;  // 1-based average rank
    for (size_t k = i; k <= j; ++k) rank[pool[k].second] = avg;
    i = j + 1;
  }
  Chains out(chains.size());
  idx = 0;
  const double denom = static_cast<double>(total) + 0.25;
  for (size_t c = 0; c < chains.size(); ++c) {
    out[c].resize(chains[c].size());
    for (size_t k = 0; k < chains[c].size(); ++k)
      out[c][k] = special::inv_norm_cdf((rank[idx++] - 0.375) / denom);
  }
  return out;
}

struct ChainVariance {
  double w;         // mean within-chain variance
  double b_over_n;  // variance of chain means
  double var_plus;
  int m, n;
};

ChainVariance chain_variance(const Chains& chains) {
  const int m = static_cast<int>(chains.size());
  const int n = static_cast<int>(chains[0].size());
  double w = 0.0;
  std::vector<double> means(m);
  for (int c = 0; c < m; ++c) {
    double mu = 0.0;
    for (double v : chains[c]) mu += v;
    mu /= n;
    means[c] = mu;
    double s2 = 0.0;
    for (double v : chains[c]) s2 += (v - mu) * (v - mu);
    w += s2 / (n - 1);
  }
  w /= m;
  double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b = m > 1 ? b / (m - 1) : 0.0;
  return {w, b, w * (n - 1.0) / n + b, m, n};
}

void check_chain_shape(const Chains& chains, size_t min_len) {
  require(chains.size() >= 2, ErrorCode::invalid_argument, "diagnostics: need at least 2 chains");
  for (const auto& c : chains) {
    require(c.size() == chains[0].size(), ErrorCode::invalid_argument,
            "diagnostics: chains must have equal lengths");
    require(c.size() >= min_len, ErrorCode::invalid_argument, "diagnostics: chains too short");
  }
}

// Geyer initial-monotone-positive-sequence correlation time of split chains.
double tau_geyer(const Chains& chains) {
  const ChainVariance cv = chain_variance(chains);
  require(cv.var_plus > 0.0 && cv.w > 0.0, ErrorCode::invalid_argument,
          "ess: zero variance draws");
  const int m = cv.m, n = cv.n;
  std::vector<double> means(m);
  for (int c = 0; c < m; ++c)
    means[c] = std::accumulate(chains[c].begin(), chains[c].end(), 0.0) / n;
  auto mean_acov = [&](int t) {
    double acc = 0.0;
    for (int c = 0; c < m; ++c) {
      const auto& x = chains[c];
      double s = 0.0;
      for (int i = 0; i + t < n; ++i) s += (x[i] - means[c]) * (x[i + t] - means[c]);
      acc += s / n;
    }
    return acc / m;
  };
  auto rho = [&](int t) { return 1.0 - (cv.w - mean_acov(t)) / cv.var_plus; };

  double tau = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (int t = 0; t + 1 < n; t += 2) {
    const double r_even = t == 0 ? 1.0 : rho(t);
    const double r_odd = rho(t + 1);
    double pair = r_even + r_odd;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);  // enforce monotone decrease
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  return std::max(tau - 1.0, 1e-12);
}

double ess_base(const Chains& split) {
  const double tau = tau_geyer(split);
  const double total = static_cast<double>(split.size()) * split[0].size();
  return total / tau;
}

double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (v.size() - 1) * p;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

}  // namespace

double rhat(const Chains& chains) {
  check_chain_shape(chains, 4);
  bool all_identical = true;
  for (size_t c = 1; c < chains.size() && all_identical; ++c)
    all_identical = chains[c] == chains[0];
  if (all_identical) return 1.0;  // zero between-chain variance
  const Chains z = rank_normalize(split_chains(chains));
  const ChainVariance cv = chain_variance(z);
  require(cv.w > 0.0, ErrorCode::invalid_argument, "rhat: zero within-chain variance");
  return std::sqrt(cv.var_plus / cv.w);
}

double ess(const Chains& chains, EssMode mode) {
  check_chain_shape(chains, 8);
  if (mode == EssMode::bulk) return ess_base(rank_normalize(split_chains(chains)));
  // Tail: indicator chains at the pooled 5% and 95% quantiles.
  std::vector<double> pooled;
  for (const auto& c : chains) pooled.insert(pooled.end(), c.begin(), c.end());
  double out = std::numeric_limits<double>::infinity();
  for (double p : {0.05, 0.95}) {
    const double q = quantile(pooled, p);
    Chains ind(chains.size());
    for (size_t c = 0; c < chains.size(); ++c) {
      ind[c].resize(chains[c].size());
      for (size_t i = 0; i < chains[c].size(); ++i) ind[c][i] = chains[c][i] <= q ? 1.0 : 0.0;
    }
    out = std::min(out, ess_base(split_chains(ind)));
  }
  return out;
}

Interval hpdi(std::vector<double> draws, double mass) {
  require(mass > 0.0 && mass < 1.0, ErrorCode::invalid_argument, "hpdi: mass in (0,1)");
  require(draws.size() >= 100, ErrorCode::invalid_argument, "hpdi: need at least 100 draws");
  std::sort(draws.begin(), draws.end());
  const size_t n = draws.size();
  const size_t k = static_cast<size_t>(std::ceil(mass * n));
  size_t best = 0;
  double width = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + k - 1 < n; ++i) {
    const double w = draws[i + k - 1] - draws[i];
    if (w < width) {
      width = w;
      best = i;
    }
  }
  return {draws[best], draws[best + k - 1]};
}

double waic(const Eigen::MatrixXd& loglik) {
  require(loglik.allFinite(), ErrorCode::invalid_argument, "waic: non-finite log likelihoods");
  const Eigen::Index d = loglik.rows(), n = loglik.cols();
  require(d >= 1 && n >= 1, ErrorCode::invalid_argument, "waic: empty matrix");
  double lppd = 0.0, p_waic = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = loglik.col(i).maxCoeff();
    double acc = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) acc += std::exp(loglik(r, i) - mx);
    lppd += mx + std::log(acc / d);
    if (d > 1) {
      const double mean = loglik.col(i).mean();
      double v = 0.0;
      for (Eigen::Index r = 0; r < d; ++r) v += (loglik(r, i) - mean) * (loglik(r, i) - mean);
      p_waic += v / (d - 1);
    }
  }
  return -2.0 * (lppd - p_waic);
}

Eigen::MatrixXd pointwise_loglik(const std::vector<ChainDraws>& chains, const FuzzyDataset& data,
                                 const ModelSpec& spec, WaicMode mode, RngStream& rng,
                                 int marginal_draws) {
  require(!chains.empty(), ErrorCode::invalid_argument, "pointwise_loglik: no chains");
  const int n = data.n();
  const double w = spec.ub - spec.lb;
  Eigen::Index total = 0;
  for (const auto& c : chains) total += c.theta.rows();
  Eigen::MatrixXd out(total, n);

  auto b4p_logpdf = [&](double m_obs, double s_obs, double y) {
    const double ystar = std::clamp((y - spec.lb) / w, 1e-12, 1.0 - 1e-12);
    return dists::logpdf(
        dists::Density(dists::Beta4P(s_obs * ystar, s_obs - s_obs * ystar, spec.lb, spec.ub)),
        m_obs);
  };

  Eigen::Index row = 0;
  for (const auto& c : chains) {
    if (mode == WaicMode::conditional)
      require(c.y_latent.rows() == c.theta.rows(), ErrorCode::invalid_argument,
              "pointwise_loglik: conditional mode needs stored latent draws");
    for (Eigen::Index r = 0; r < c.theta.rows(); ++r, ++row) {
      const ThetaY th = theta_from_vector(spec, c.theta.row(r).transpose());
      const Eigen::VectorXd eta = linear_predictor(data.X, th.beta);
      for (int i = 0; i < n; ++i) {
        if (mode == WaicMode::conditional) {
          out(row, i) = b4p_logpdf(data.obs[i].m, data.obs[i].s, c.y_latent(r, i));
        } else {
          const LatentDensity den = family_params(spec, th, eta(i));
          double mx = -std::numeric_limits<double>::infinity();
          std::vector<double> lls(marginal_draws);
          for (int k = 0; k < marginal_draws; ++k) {
            lls[k] = b4p_logpdf(data.obs[i].m, data.obs[i].s, den.sample(rng));
            mx = std::max(mx, lls[k]);
          }
          double acc = 0.0;
          for (double v : lls) acc += std::exp(v - mx);
          out(row, i) = mx + std::log(acc / marginal_draws);
        }
      }
    }
  }
  return out;
}

double tv_distance(const std::function<double(double)>& f, const std::function<double(double)>& g,
                   Interval support, const std::vector<double>& breakpoints) {
  auto diff = [&](double x) { return 0.5 * std::fabs(f(x) - g(x)); };
  return quad::integrate(diff, support.lo, support.hi, 1e-7, 1e-12, breakpoints).value;
}

double hellinger(const std::function<double(double)>& f, const std::function<double(double)>& g,
                 Interval support, const std::vector<double>& breakpoints) {
  auto diff = [&](double x) {
    const double d = std::sqrt(std::max(f(x), 0.0)) - std::sqrt(std::max(g(x), 0.0));
    return 0.5 * d * d;
  };
  const double h2 = quad::integrate(diff, support.lo, support.hi, 1e-7, 1e-12, breakpoints).value;
  return std::sqrt(std::max(h2, 0.0));
}

std::vector<PosteriorSummary> summarize(const std::vector<ChainDraws>& chains,
                                        const std::vector<std::string>& names) {
  require(!chains.empty(), ErrorCode::invalid_argument, "summarize: no chains");
  const Eigen::Index dim = chains[0].theta.cols();
  require(static_cast<Eigen::Index>(names.size()) == dim, ErrorCode::invalid_argument,
          "summarize: name count mismatch");
  std::vector<PosteriorSummary> out;
  out.reserve(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Chains per_chain(chains.size());
    std::vector<double> pooled;
    for (size_t c = 0; c < chains.size(); ++c) {
      const auto col = chains[c].theta.col(j);
      per_chain[c].assign(col.data(), col.data() + col.size());
      pooled.insert(pooled.end(), per_chain[c].begin(), per_chain[c].end());
    }
    const double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / pooled.size();
    double var = 0.0;
    for (double v : pooled) var += (v - mean) * (v - mean);
    var /= (pooled.size() - 1);
    const Interval hp = hpdi(pooled, 0.95);
    PosteriorSummary s;
    s.name = names[j];
    s.mean = mean;
    s.sd = std::sqrt(var);
    s.hpdi_lo = hp.lo;
    s.hpdi_hi = hp.hi;
    s.rhat = chains.size() >= 2 ? rhat(per_chain) : std::numeric_limits<double>::quiet_NaN();
    s.ess_bulk = chains.size() >= 2 ? ess(per_chain, EssMode::bulk)
                                    : std::numeric_limits<double>::quiet_NaN();
    s.ess_tail = chains.size() >= 2 ? ess(per_chain, EssMode::tail)
                                    : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(s));
  }
  return out;
}

PPCReport ppc(const std::vector<ChainDraws>& chains, const FuzzyDataset& data,
              const ModelSpec& spec, const ThetaS& theta_s, int replicates, RngStream& rng) {
  require(replicates >= 100, ErrorCode::invalid_argument, "ppc: need at least 100 replicates");
  require(!chains.empty(), ErrorCode::invalid_argument, "ppc: no chains");
  const int n = data.n();
  Eigen::Index total = 0;
  for (const auto& c : chains) total += c.theta.rows();
  require(total > 0, ErrorCode::invalid_argument, "ppc: empty chains");

  auto stat_of = [&](const FuzzyObservation& o, int which) {
    const BetaFuzzyNumber fn(o.m, o.s, o.lb, o.ub);
    switch (which) {
      case 0: return centroid(fn);
      case 1: return o.ub - o.lb;
      default: return kaufman_index(fn);
    }
  };

  // replicate_stats[stat][unit][rep]
  std::vector<std::vector<std::vector<double>>> rep_stats(
      3, std::vector<std::vector<double>>(n, std::vector<double>(replicates)));
  for (int b = 0; b < replicates; ++b) {
    // One pooled posterior draw indexes a full parameter vector.
    const Eigen::Index pick = static_cast<Eigen::Index>(rng.uniform() * total);
    Eigen::Index off = std::min(pick, total - 1);
    const ChainDraws* chain = &chains[0];
    for (const auto& c : chains) {
      if (off < c.theta.rows()) {
        chain = &c;
        break;
      }
      off -= c.theta.rows();
    }
    const ThetaY th = theta_from_vector(spec, chain->theta.row(off).transpose());
    RngStream sub = rng.substream(0x99C, static_cast<std::uint64_t>(b));
    const SimulationResult sim = simulate(spec, th, theta_s, data.X, sub);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 3; ++k) rep_stats[k][i][b] = stat_of(sim.data.obs[i], k);
  }

  PPCReport report;
  report.replicates = replicates;
  const char* stat_names[3] = {"centroid", "support-width", "kaufman"};
  for (int k = 0; k < 3; ++k) {
    PPCStatReport sr;
    sr.name = stat_names[k];
    sr.observed.resize(n);
    sr.q_min.resize(n);
    sr.q1.resize(n);
    sr.q3.resize(n);
    sr.q_max.resize(n);
    int covered = 0;
    double p_acc = 0.0;
    for (int i = 0; i < n; ++i) {
      sr.observed[i] = stat_of(data.obs[i], k);
      auto& reps = rep_stats[k][i];
      sr.q_min[i] = *std::min_element(reps.begin(), reps.end());
      sr.q_max[i] = *std::max_element(reps.begin(), reps.end());
      sr.q1[i] = quantile(reps, 0.25);
      sr.q3[i] = quantile(reps, 0.75);
      const double lo = quantile(reps, 0.025), hi = quantile(reps, 0.975);
      if (sr.observed[i] >= lo && sr.observed[i] <= hi) ++covered;
      int above = 0, ties = 0;
      for (double v : reps) {
        if (v > sr.observed[i])
          ++above;
        else if (v == sr.observed[i])
          ++ties;
      }
      p_acc += (above + 0.5 * ties) / replicates;
    }
    sr.cp = static_cast<double>(covered) / n;
    sr.bp = std::fabs(2.0 * (p_acc / n) - 1.0);
    report.stats.push_back(std::move(sr));
  }
  return report;
}

}  // namespace fzr::diag
