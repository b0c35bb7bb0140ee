#include "core/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "core/approx.hpp"
#include "core/diagnostics.hpp"
#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace fzr::bench {

namespace {

struct FamilyGrid {
  std::string name;
  std::vector<dists::Density> configs;
};

std::vector<FamilyGrid> table_grids() {
  std::vector<FamilyGrid> out;
  {
    FamilyGrid g{"logit-normal", {}};
    for (double mu : {-1.85, 0.0, 1.85})
      for (double sg : {1.0, 2.0, 3.5}) g.configs.emplace_back(dists::LogitNormal(mu, sg));
    out.push_back(std::move(g));
  }
  {
    FamilyGrid g{"beta", {}};
    for (double a : {0.5, 2.0, 5.0})
      for (double b : {0.5, 1.0, 3.0}) g.configs.emplace_back(dists::Beta(a, b));
    out.push_back(std::move(g));
  }
  {
    FamilyGrid g{"log-bilal", {}};
    for (double th : {0.3, 0.5, 1.0, 1.5}) g.configs.emplace_back(dists::LogBilal(th));
    out.push_back(std::move(g));
  }
  {
    FamilyGrid g{"kumaraswamy", {}};
    for (double a : {0.5, 2.0, 5.0})
      for (double b : {0.5, 3.0, 6.0}) g.configs.emplace_back(dists::Kumaraswamy(a, b));
    out.push_back(std::move(g));
  }
  {
    FamilyGrid g{"truncated-normal", {}};
    for (double mu : {0.2, 0.3, 0.5})
      for (double sg : {0.1, 0.17, 0.2})
        g.configs.emplace_back(dists::TruncNormal(0.0, 1.0, mu, sg));
    out.push_back(std::move(g));
  }
  return out;
}

const double kGammaShapes[3] = {15.0, 30.0, 45.0};
const double kGammaScales[3] = {5.0, 15.0, 35.0};

}  // namespace

CaseDistances approximation_distances(const dists::Density& fy, double m, double s) {
  const LatentDensity target{fy, 0.0, 1.0, false, false};
  const approx::B4PProposal prop = approx::fit_b4p(m, s, target);
  const double a = prop.lambda_hat * prop.sigma_hat;
  const double b = prop.sigma_hat - a;
  const dists::Density fitted{dists::Beta4P(a, b, 0.0, 1.0)};

  // Normalize the exact conditional on a shifted log scale.
  const double peak_width =
      std::sqrt(prop.lambda_hat * (1.0 - prop.lambda_hat) / (prop.sigma_hat + 3.0));
  std::vector<double> pts{m, prop.lambda_hat};
  for (double k : {-6.0, -2.0, 2.0, 6.0}) {
    const double p = prop.lambda_hat + k * peak_width;
    if (p > 0.0 && p < 1.0) pts.push_back(p);
  }
  double shift = approx::log_unnorm_posterior_y(prop.lambda_hat, m, s, target);
  for (int i = 1; i < 64; ++i)
    shift = std::max(shift, approx::log_unnorm_posterior_y(i / 64.0, m, s, target));
  auto unnorm = [&](double y) {
    return std::exp(approx::log_unnorm_posterior_y(y, m, s, target) - shift);
  };
  const double z = quad::integrate(unnorm, 0.0, 1.0, 1e-9, 0.0, pts).value;
  require(z > 0.0 && std::isfinite(z), ErrorCode::numeric,
          "benchmark: conditional density failed to normalize");
  auto exact = [&](double y) { return unnorm(y) / z; };
  auto approx_pdf = [&](double y) { return std::exp(dists::logpdf(fitted, y)); };

  const Interval sup{0.0, 1.0};
  return {diag::tv_distance(exact, approx_pdf, sup, pts),
          diag::hellinger(exact, approx_pdf, sup, pts), prop.fallback};
}

std::vector<Row> run(int reps, std::uint64_t seed, int threads) {
  require(reps >= 1, ErrorCode::invalid_argument, "benchmark: reps >= 1");
  const std::vector<FamilyGrid> grids = table_grids();
  const RngStream master(seed);

  struct Acc {
    double tv_sum = 0, tv_sq = 0, hd_sum = 0, hd_sq = 0;
    long count = 0, failures = 0;
    void add(const CaseDistances& c) {
      tv_sum += c.tv;
      tv_sq += c.tv * c.tv;
      hd_sum += c.hd;
      hd_sq += c.hd * c.hd;
      ++count;
    }
    void merge(const Acc& o) {
      tv_sum += o.tv_sum;
      tv_sq += o.tv_sq;
      hd_sum += o.hd_sum;
      hd_sq += o.hd_sq;
      count += o.count;
      failures += o.failures;
    }
  };

  auto run_config = [&](size_t fam, size_t cfg) {
    Acc acc;
    const dists::Density& fy = grids[fam].configs[cfg];
    for (int gi = 0; gi < 3; ++gi) {
      for (int gj = 0; gj < 3; ++gj) {
        const dists::GammaDist glaw(kGammaShapes[gi], kGammaScales[gj]);
        RngStream rng = master.substream(fam * 100 + cfg, gi * 3 + gj);
        for (int r = 0; r < reps; ++r) {
          const double y = std::clamp(dists::sample(dists::Density(fy), rng), 1e-12, 1.0 - 1e-12);
          const double s = rng.gamma(glaw.shape, glaw.scale);
          const double m = std::clamp(rng.beta(s * y, s - s * y), 1e-12, 1.0 - 1e-12);
          try {
            acc.add(approximation_distances(fy, m, s));
          } catch (const Error&) {
            ++acc.failures;
          }
        }
      }
    }
    return acc;
  };

  std::vector<std::pair<size_t, size_t>> tasks;
  for (size_t f = 0; f < grids.size(); ++f)
    for (size_t c = 0; c < grids[f].configs.size(); ++c) tasks.emplace_back(f, c);

  const int nthreads =
      threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<Acc> per_task(tasks.size());
  if (nthreads <= 1) {
    for (size_t t = 0; t < tasks.size(); ++t)
      per_task[t] = run_config(tasks[t].first, tasks[t].second);
  } else {
    std::vector<std::future<void>> fut;
    std::atomic<size_t> next{0};
    for (int w = 0; w < nthreads; ++w)
      fut.push_back(std::async(std::launch::async, [&] {
        for (size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1))
          per_task[t] = run_config(tasks[t].first, tasks[t].second);
      }));
    for (auto& f : fut) f.get();
  }

  std::vector<Row> rows;
  for (size_t f = 0; f < grids.size(); ++f) {
    Acc acc;
    for (size_t t = 0; t < tasks.size(); ++t)
      if (tasks[t].first == f) acc.merge(per_task[t]);
    Row row;
    row.family = grids[f].name;
    row.count = acc.count;
    row.failures = acc.failures;
    if (acc.count > 0) {
      row.tv_mean = acc.tv_sum / acc.count;
      row.hd_mean = acc.hd_sum / acc.count;
      if (acc.count > 1) {
        const double tv_var = (acc.tv_sq - acc.count * row.tv_mean * row.tv_mean) / (acc.count - 1);
        const double hd_var = (acc.hd_sq - acc.count * row.hd_mean * row.hd_mean) / (acc.count - 1);
        row.tv_se = std::sqrt(std::max(tv_var, 0.0) / acc.count);
        row.hd_se = std::sqrt(std::max(hd_var, 0.0) / acc.count);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fzr::bench
