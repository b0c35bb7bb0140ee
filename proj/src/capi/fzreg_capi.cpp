#include "fzreg.h"

#include <cstring>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "core/approx.hpp"
#include "core/benchmark.hpp"
#include "core/dataset_io.hpp"
#include "core/diagnostics.hpp"
#include "core/dists.hpp"
#include "core/errors.hpp"
#include "core/fuzznum.hpp"
#include "core/gibbs.hpp"
#include "core/model.hpp"

namespace {

thread_local std::string g_last_error;

fzr_status status_of(const fzr::Error& e) {
  switch (e.code()) {
    case fzr::ErrorCode::invalid_argument: return FZR_ERR_INVALID_ARGUMENT;
    case fzr::ErrorCode::domain: return FZR_ERR_DOMAIN;
    case fzr::ErrorCode::parse: return FZR_ERR_PARSE;
    case fzr::ErrorCode::numeric: return FZR_ERR_NUMERIC;
    case fzr::ErrorCode::io: return FZR_ERR_IO;
    case fzr::ErrorCode::internal: return FZR_ERR_INTERNAL;
  }
  return FZR_ERR_INTERNAL;
}

template <typename F>
fzr_status wrap(F&& fn) {
  try {
    fn();
    return FZR_OK;
  } catch (const fzr::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FZR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FZR_ERR_INTERNAL;
  }
}

template <typename T, typename F>
T* wrap_new(F&& fn) {
  try {
    return fn();
  } catch (const fzr::Error& e) {
    g_last_error = e.what();
    return nullptr;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  } catch (...) {
    g_last_error = "unknown error";
    return nullptr;
  }
}

}  // namespace

struct fzr_config {
  std::map<std::string, std::string> kv;

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  double get_num(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (...) {
      throw fzr::Error(fzr::ErrorCode::parse, "config: bad numeric value for '" + key + "'");
    }
  }
  bool get_flag(const std::string& key, bool fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return it->second == "1" || it->second == "true" || it->second == "yes" ||
           it->second == "on";
  }
  bool has(const std::string& key) const { return kv.count(key) > 0; }
};

struct fzr_dataset {
  fzr::FuzzyDataset data;
  Eigen::VectorXd latent;  // filled by fzr_simulate
};

struct fzr_fit {
  fzr::ModelSpec spec;
  fzr::SamplerConfig cfg;
  fzr::FuzzyDataset data;
  std::vector<fzr::ChainDraws> chains;
  std::vector<fzr::diag::PosteriorSummary> summaries;
  std::vector<std::string> names;
};

struct fzr_ppc {
  fzr::diag::PPCReport report;
  std::vector<std::string> ids;
};

struct fzr_benchmark {
  std::vector<fzr::bench::Row> rows;
};

namespace {

fzr::ModelSpec spec_from_config(const fzr_config& cfg, int num_covariates, double lb, double ub) {
  fzr::ModelSpec spec;
  spec.family = fzr::family_from_string(cfg.get("family", "beta"));
  spec.link = cfg.has("link") ? fzr::link_from_string(cfg.get("link", "logit"))
                              : fzr::default_link(spec.family);
  spec.lb = lb;
  spec.ub = ub;
  spec.num_covariates = num_covariates;
  spec.prior.beta_sd = cfg.get_num("prior_beta_sd", 10.0);
  spec.prior.phi_sd = cfg.get_num("prior_phi_sd", 5.0);
  spec.validate();
  return spec;
}

fzr::SamplerConfig sampler_from_config(const fzr_config& cfg) {
  fzr::SamplerConfig sc;
  sc.chains = static_cast<int>(cfg.get_num("chains", 5));
  sc.samples = static_cast<int>(cfg.get_num("samples", 4000));
  sc.burnin = static_cast<int>(cfg.get_num("burnin", 2000));
  sc.seed = static_cast<std::uint64_t>(cfg.get_num("seed", 1));
  sc.eps = cfg.get_num("eps", 1e-6);
  sc.mh_correct = cfg.get_flag("mh_correct", false);
  sc.sn_refresh = static_cast<int>(cfg.get_num("sn_refresh", 1));
  sc.keep_latent = cfg.get_flag("keep_latent", true);
  sc.threads = static_cast<int>(cfg.get_num("threads", 0));
  sc.validate();
  return sc;
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (...) {
      throw fzr::Error(fzr::ErrorCode::parse, "config: bad entry in " + what + ": '" + tok + "'");
    }
  }
  fzr::require(!vals.empty(), fzr::ErrorCode::parse, "config: empty " + what);
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

extern "C" {

const char* fzr_version(void) { return "0.1.0"; }

const char* fzr_last_error(void) { return g_last_error.c_str(); }

/* ---------- fuzzy numbers ---------- */

fzr_status fzr_bfn_membership(double m, double s, double lb, double ub, double x, double* out) {
  return wrap([&] { *out = fzr::BetaFuzzyNumber(m, s, lb, ub).membership(x); });
}

fzr_status fzr_bfn_alpha_cut(double m, double s, double lb, double ub, double alpha, double* lo,
                             double* hi) {
  return wrap([&] {
    const fzr::Interval cut = fzr::alpha_cut(fzr::BetaFuzzyNumber(m, s, lb, ub), alpha);
    *lo = cut.lo;
    *hi = cut.hi;
  });
}

fzr_status fzr_bfn_centroid(double m, double s, double lb, double ub, double* out) {
  return wrap([&] { *out = fzr::centroid(fzr::BetaFuzzyNumber(m, s, lb, ub)); });
}

fzr_status fzr_bfn_kaufman(double m, double s, double lb, double ub, double* out) {
  return wrap([&] { *out = fzr::kaufman_index(fzr::BetaFuzzyNumber(m, s, lb, ub)); });
}

fzr_status fzr_trapezoid_to_beta(double a1, double a2, double a3, double a4, double* m, double* s,
                                 double* residual) {
  return wrap([&] {
    const fzr::ConversionResult r = fzr::trapezoid_to_beta({a1, a2, a3, a4});
    *m = r.fn.m;
    *s = r.fn.s;
    if (residual) *residual = r.residual;
  });
}

fzr_status fzr_c_factor(double alpha_s, double beta_s, double* out) {
  return wrap([&] { *out = fzr::dists::c_factor(alpha_s, beta_s); });
}

/* ---------- configuration ---------- */

fzr_config* fzr_config_create(void) { return new fzr_config(); }

fzr_status fzr_config_load(fzr_config* cfg, const char* path) {
  return wrap([&] {
    for (const auto& [k, v] : fzr::io::read_config(path)) cfg->kv[k] = v;
  });
}

fzr_status fzr_config_set(fzr_config* cfg, const char* key, const char* value) {
  return wrap([&] {
    fzr::require(cfg && key && value, fzr::ErrorCode::invalid_argument, "null argument");
    cfg->kv[key] = value;
  });
}

const char* fzr_config_get(const fzr_config* cfg, const char* key) {
  if (!cfg || !key) return nullptr;
  auto it = cfg->kv.find(key);
  return it == cfg->kv.end() ? nullptr : it->second.c_str();
}

void fzr_config_free(fzr_config* cfg) { delete cfg; }

/* ---------- datasets ---------- */

fzr_dataset* fzr_dataset_read(const fzr_config* cfg, const char* path) {
  return wrap_new<fzr_dataset>([&]() -> fzr_dataset* {
    fzr::require(cfg && path, fzr::ErrorCode::invalid_argument, "null argument");
    fzr::io::IngestOptions opts;
    const std::string fmt = cfg->get("format", "beta-fuzzy");
    if (fmt == "beta-fuzzy")
      opts.format = fzr::io::DataFormat::beta_fuzzy;
    else if (fmt == "trapezoidal")
      opts.format = fzr::io::DataFormat::trapezoidal;
    else
      throw fzr::Error(fzr::ErrorCode::invalid_argument, "unknown format: " + fmt);
    if (cfg->has("lb") && cfg->has("ub")) {
      opts.lb = cfg->get_num("lb", 0.0);
      opts.ub = cfg->get_num("ub", 1.0);
    }
    opts.standardize = cfg->get_flag("standardize", true);
    const fzr::Family fam = fzr::family_from_string(cfg->get("family", "beta"));
    opts.widen_for_unbounded = fam == fzr::Family::lognormal && !opts.lb.has_value();
    auto* ds = new fzr_dataset();
    ds->data = fzr::io::read_dataset(path, opts);
    return ds;
  });
}

fzr_dataset* fzr_dataset_from_arrays(int n, int n_covariates, const double* m, const double* s,
                                     const double* x, double lb, double ub) {
  return wrap_new<fzr_dataset>([&]() -> fzr_dataset* {
    fzr::require(n >= 1 && n_covariates >= 0 && m && s, fzr::ErrorCode::invalid_argument,
                 "bad arguments");
    fzr::require(n_covariates == 0 || x, fzr::ErrorCode::invalid_argument,
                 "covariates requested but x is null");
    auto* ds = new fzr_dataset();
    fzr::FuzzyDataset& d = ds->data;
    d.lb = lb;
    d.ub = ub;
    d.X.resize(n, n_covariates + 1);
    d.X.col(0).setOnes();
    d.covariate_names.assign(n_covariates + 1, "");
    d.covariate_names[0] = "intercept";
    for (int j = 0; j < n_covariates; ++j) d.covariate_names[j + 1] = "x" + std::to_string(j + 1);
    for (int i = 0; i < n; ++i) {
      d.obs.push_back({m[i], s[i], lb, ub});
      d.ids.push_back(std::to_string(i + 1));
      for (int j = 0; j < n_covariates; ++j) d.X(i, j + 1) = x[i * n_covariates + j];
    }
    d.validate();
    return ds;
  });
}

fzr_status fzr_dataset_write(const fzr_dataset* ds, const char* path) {
  return wrap([&] {
    fzr::require(ds && path, fzr::ErrorCode::invalid_argument, "null argument");
    fzr::io::write_dataset(ds->data, path);
  });
}

int fzr_dataset_n(const fzr_dataset* ds) { return ds ? ds->data.n() : 0; }

int fzr_dataset_dim(const fzr_dataset* ds) { return ds ? ds->data.num_covariates() : 0; }

fzr_status fzr_dataset_row(const fzr_dataset* ds, int i, double* m, double* s, double* lb,
                           double* ub) {
  return wrap([&] {
    fzr::require(ds && i >= 0 && i < ds->data.n(), fzr::ErrorCode::invalid_argument,
                 "row index out of range");
    const fzr::FuzzyObservation& o = ds->data.obs[i];
    if (m) *m = o.m;
    if (s) *s = o.s;
    if (lb) *lb = o.lb;
    if (ub) *ub = o.ub;
  });
}

fzr_status fzr_dataset_bounds(const fzr_dataset* ds, double* lb, double* ub) {
  return wrap([&] {
    fzr::require(ds, fzr::ErrorCode::invalid_argument, "null dataset");
    if (lb) *lb = ds->data.lb;
    if (ub) *ub = ds->data.ub;
  });
}

void fzr_dataset_free(fzr_dataset* ds) { delete ds; }

fzr_dataset* fzr_simulate(const fzr_config* cfg) {
  return wrap_new<fzr_dataset>([&]() -> fzr_dataset* {
    fzr::require(cfg, fzr::ErrorCode::invalid_argument, "null config");
    const int n = static_cast<int>(cfg->get_num("n", 200));
    const int ncov = static_cast<int>(cfg->get_num("covariates", 1));
    const double lb = cfg->get_num("lb", 0.0);
    const double ub = cfg->get_num("ub", 1.0);
    fzr::ModelSpec spec = spec_from_config(*cfg, ncov + 1, lb, ub);

    fzr::ThetaY truth;
    truth.beta = cfg->has("beta_true")
                     ? parse_vector(cfg->get("beta_true", ""), "beta_true")
                     : Eigen::VectorXd::Zero(spec.num_covariates);
    fzr::require(truth.beta.size() == spec.num_covariates, fzr::ErrorCode::invalid_argument,
                 "beta_true length must equal covariates + 1");
    truth.phi_unc = cfg->get_num("phi_true", 0.0);
    const fzr::ThetaS theta_s{cfg->get_num("alpha_s", 15.0), cfg->get_num("beta_s", 5.0)};

    fzr::RngStream rng(static_cast<std::uint64_t>(cfg->get_num("seed", 1)));
    fzr::RngStream xrng = rng.substream(0xDE51);
    Eigen::MatrixXd X(n, spec.num_covariates);
    X.col(0).setOnes();
    for (int j = 1; j < spec.num_covariates; ++j)
      for (int i = 0; i < n; ++i) X(i, j) = xrng.normal();

    fzr::RngStream srng = rng.substream(0x51A7);
    const fzr::SimulationResult sim = fzr::simulate(spec, truth, theta_s, X, srng);
    auto* ds = new fzr_dataset();
    ds->data = sim.data;
    ds->latent = sim.y_latent;
    return ds;
  });
}

fzr_status fzr_dataset_latent(const fzr_dataset* ds, double* out) {
  return wrap([&] {
    fzr::require(ds && out, fzr::ErrorCode::invalid_argument, "null argument");
    fzr::require(ds->latent.size() == ds->data.n(), fzr::ErrorCode::invalid_argument,
                 "dataset carries no latent outcomes");
    Eigen::Map<Eigen::VectorXd>(out, ds->latent.size()) = ds->latent;
  });
}

/* ---------- fitting ---------- */

fzr_fit* fzr_fit_run(const fzr_config* cfg, const fzr_dataset* ds) {
  return wrap_new<fzr_fit>([&]() -> fzr_fit* {
    fzr::require(cfg && ds, fzr::ErrorCode::invalid_argument, "null argument");
    auto fit = std::make_unique<fzr_fit>();
    fit->data = ds->data;
    fit->spec = spec_from_config(*cfg, fit->data.num_covariates(), fit->data.lb, fit->data.ub);
    fit->cfg = sampler_from_config(*cfg);
    fit->chains = fzr::run_chains(fit->data, fit->spec, fit->cfg);
    for (int j = 0; j < fit->spec.num_covariates; ++j)
      fit->names.push_back("beta_" + std::to_string(j));
    if (fit->spec.has_dispersion()) fit->names.push_back("phi");
    fit->summaries = fzr::diag::summarize(fit->chains, fit->names);
    return fit.release();
  });
}

int fzr_fit_chains(const fzr_fit* fit) { return fit ? static_cast<int>(fit->chains.size()) : 0; }

int fzr_fit_samples(const fzr_fit* fit) {
  return fit && !fit->chains.empty() ? static_cast<int>(fit->chains[0].theta.rows()) : 0;
}

int fzr_fit_dim(const fzr_fit* fit) {
  return fit && !fit->chains.empty() ? static_cast<int>(fit->chains[0].theta.cols()) : 0;
}

const char* fzr_fit_param_name(const fzr_fit* fit, int j) {
  if (!fit || j < 0 || j >= static_cast<int>(fit->names.size())) return nullptr;
  return fit->names[j].c_str();
}

fzr_status fzr_fit_draws(const fzr_fit* fit, int chain, double* out) {
  return wrap([&] {
    fzr::require(fit && out && chain >= 0 && chain < static_cast<int>(fit->chains.size()),
                 fzr::ErrorCode::invalid_argument, "bad arguments");
    const Eigen::MatrixXd& th = fit->chains[chain].theta;
    for (Eigen::Index r = 0; r < th.rows(); ++r)
      for (Eigen::Index c = 0; c < th.cols(); ++c) out[r * th.cols() + c] = th(r, c);
  });
}

fzr_status fzr_fit_summary(const fzr_fit* fit, int j, double* mean, double* sd, double* hpdi_lo,
                           double* hpdi_hi, double* rhat, double* ess_bulk, double* ess_tail) {
  return wrap([&] {
    fzr::require(fit && j >= 0 && j < static_cast<int>(fit->summaries.size()),
                 fzr::ErrorCode::invalid_argument, "bad arguments");
    const fzr::diag::PosteriorSummary& s = fit->summaries[j];
    if (mean) *mean = s.mean;
    if (sd) *sd = s.sd;
    if (hpdi_lo) *hpdi_lo = s.hpdi_lo;
    if (hpdi_hi) *hpdi_hi = s.hpdi_hi;
    if (rhat) *rhat = s.rhat;
    if (ess_bulk) *ess_bulk = s.ess_bulk;
    if (ess_tail) *ess_tail = s.ess_tail;
  });
}

fzr_status fzr_fit_theta_s(const fzr_fit* fit, double* alpha_s, double* beta_s) {
  return wrap([&] {
    fzr::require(fit && !fit->chains.empty(), fzr::ErrorCode::invalid_argument, "empty fit");
    if (alpha_s) *alpha_s = fit->chains[0].theta_s.alpha_s;
    if (beta_s) *beta_s = fit->chains[0].theta_s.beta_s;
  });
}

int fzr_fit_b4p_fallbacks(const fzr_fit* fit) {
  if (!fit) return 0;
  int acc = 0;
  for (const auto& c : fit->chains) acc += c.b4p_fallback_count;
  return acc;
}

double fzr_fit_mh_accept_rate(const fzr_fit* fit) {
  if (!fit || fit->chains.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& c : fit->chains) acc += c.mh_accept_rate;
  return acc / static_cast<double>(fit->chains.size());
}

fzr_status fzr_fit_waic(const fzr_fit* fit, int marginal, double* out) {
  return wrap([&] {
    fzr::require(fit && out, fzr::ErrorCode::invalid_argument, "null argument");
    fzr::RngStream rng = fzr::RngStream(fit->cfg.seed).substream(0x3A1C);
    const Eigen::MatrixXd ll = fzr::diag::pointwise_loglik(
        fit->chains, fit->data, fit->spec,
        marginal ? fzr::diag::WaicMode::marginal : fzr::diag::WaicMode::conditional, rng);
    *out = fzr::diag::waic(ll);
  });
}

fzr_status fzr_fit_write_draws(const fzr_fit* fit, const char* path) {
  return wrap([&] {
    fzr::require(fit && path, fzr::ErrorCode::invalid_argument, "null argument");
    std::ostringstream os;
    os << "chain,iter";
    for (const auto& n : fit->names) os << "," << n;
    os << "\n";
    for (const auto& c : fit->chains) {
      for (Eigen::Index r = 0; r < c.theta.rows(); ++r) {
        os << c.chain_id << "," << r;
        for (Eigen::Index j = 0; j < c.theta.cols(); ++j)
          os << "," << fzr::io::format_double(c.theta(r, j));
        os << "\n";
      }
    }
    fzr::io::atomic_write(path, os.str());
  });
}

fzr_status fzr_fit_write_summary(const fzr_fit* fit, const char* path) {
  return wrap([&] {
    fzr::require(fit && path, fzr::ErrorCode::invalid_argument, "null argument");
    std::ostringstream os;
    for (const auto& s : fit->summaries) {
      os << "parameter " << s.name << "\n";
      os << "  mean     " << fmt4(s.mean) << "\n";
      os << "  sd       " << fmt4(s.sd) << "\n";
      os << "  hpdi_lb  " << fmt4(s.hpdi_lo) << "\n";
      os << "  hpdi_ub  " << fmt4(s.hpdi_hi) << "\n";
      os << "  rhat     " << fmt4(s.rhat) << "\n";
      os << "  ess_bulk " << fmt4(s.ess_bulk) << "\n";
      os << "  ess_tail " << fmt4(s.ess_tail) << "\n";
    }
    os << "gamma_fuzziness\n";
    os << "  alpha_s  " << fmt4(fit->chains[0].theta_s.alpha_s) << "\n";
    os << "  beta_s   " << fmt4(fit->chains[0].theta_s.beta_s) << "\n";
    int fallbacks = 0, errors = 0;
    for (const auto& c : fit->chains) {
      fallbacks += c.b4p_fallback_count;
      errors += c.b4p_error_count;
    }
    os << "proposal_fit\n";
    os << "  fallbacks " << fallbacks << "\n";
    os << "  errors    " << errors << "\n";
    if (fit->cfg.mh_correct)
      os << "  mh_accept " << fmt4(fzr_fit_mh_accept_rate(fit)) << "\n";
    if (!fit->data.standardize_center.empty()) {
      os << "standardization\n";
      for (int j = 1; j < fit->data.num_covariates(); ++j)
        os << "  " << fit->data.covariate_names[j] << " center "
           << fzr::io::format_double(fit->data.standardize_center[j]) << " scale "
           << fzr::io::format_double(fit->data.standardize_scale[j]) << "\n";
    }
    fzr::io::atomic_write(path, os.str());
  });
}

void fzr_fit_free(fzr_fit* fit) { delete fit; }

/* ---------- posterior predictive check ---------- */

fzr_ppc* fzr_ppc_run(const fzr_config* cfg, const fzr_fit* fit, const fzr_dataset* ds) {
  return wrap_new<fzr_ppc>([&]() -> fzr_ppc* {
    fzr::require(cfg && fit && ds, fzr::ErrorCode::invalid_argument, "null argument");
    const int B = static_cast<int>(cfg->get_num("ppc_replicates", 500));
    fzr::RngStream rng =
        fzr::RngStream(static_cast<std::uint64_t>(cfg->get_num("seed", 1))).substream(0xBBC);
    auto* out = new fzr_ppc();
    out->report =
        fzr::diag::ppc(fit->chains, ds->data, fit->spec, fit->chains[0].theta_s, B, rng);
    out->ids = ds->data.ids;
    return out;
  });
}

fzr_status fzr_ppc_stat(const fzr_ppc* ppc, int stat, double* cp, double* bp) {
  return wrap([&] {
    fzr::require(ppc && stat >= 0 && stat < static_cast<int>(ppc->report.stats.size()),
                 fzr::ErrorCode::invalid_argument, "bad arguments");
    if (cp) *cp = ppc->report.stats[stat].cp;
    if (bp) *bp = ppc->report.stats[stat].bp;
  });
}

fzr_status fzr_ppc_write(const fzr_ppc* ppc, const char* quantiles_csv, const char* report_txt) {
  return wrap([&] {
    fzr::require(ppc, fzr::ErrorCode::invalid_argument, "null handle");
    if (quantiles_csv) {
      std::ostringstream os;
      os << "statistic,id,observed,min,q1,q3,max\n";
      for (const auto& st : ppc->report.stats) {
        for (size_t i = 0; i < st.observed.size(); ++i) {
          os << st.name << "," << ppc->ids[i] << "," << fzr::io::format_double(st.observed[i])
             << "," << fzr::io::format_double(st.q_min[i]) << ","
             << fzr::io::format_double(st.q1[i]) << "," << fzr::io::format_double(st.q3[i]) << ","
             << fzr::io::format_double(st.q_max[i]) << "\n";
        }
      }
      fzr::io::atomic_write(quantiles_csv, os.str());
    }
    if (report_txt) {
      std::ostringstream os;
      os << "replicates " << ppc->report.replicates << "\n";
      for (const auto& st : ppc->report.stats)
        os << st.name << " CP " << fmt4(st.cp) << " bP " << fmt4(st.bp) << "\n";
      fzr::io::atomic_write(report_txt, os.str());
    }
  });
}

void fzr_ppc_free(fzr_ppc* ppc) { delete ppc; }

/* ---------- benchmark ---------- */

fzr_benchmark* fzr_benchmark_run(const fzr_config* cfg) {
  return wrap_new<fzr_benchmark>([&]() -> fzr_benchmark* {
    fzr::require(cfg, fzr::ErrorCode::invalid_argument, "null config");
    const int reps = static_cast<int>(cfg->get_num("reps", 500));
    const auto seed = static_cast<std::uint64_t>(cfg->get_num("seed", 1));
    const int threads = static_cast<int>(cfg->get_num("threads", 0));
    auto* out = new fzr_benchmark();
    out->rows = fzr::bench::run(reps, seed, threads);
    return out;
  });
}

int fzr_benchmark_rows(const fzr_benchmark* b) {
  return b ? static_cast<int>(b->rows.size()) : 0;
}

fzr_status fzr_benchmark_row(const fzr_benchmark* b, int idx, const char** family,
                             double* tv_mean, double* tv_se, double* hd_mean, double* hd_se,
                             long* count) {
  return wrap([&] {
    fzr::require(b && idx >= 0 && idx < static_cast<int>(b->rows.size()),
                 fzr::ErrorCode::invalid_argument, "bad arguments");
    const fzr::bench::Row& r = b->rows[idx];
    if (family) *family = r.family.c_str();
    if (tv_mean) *tv_mean = r.tv_mean;
    if (tv_se) *tv_se = r.tv_se;
    if (hd_mean) *hd_mean = r.hd_mean;
    if (hd_se) *hd_se = r.hd_se;
    if (count) *count = r.count;
  });
}

fzr_status fzr_benchmark_write(const fzr_benchmark* b, const char* path) {
  return wrap([&] {
    fzr::require(b && path, fzr::ErrorCode::invalid_argument, "null argument");
    std::ostringstream os;
    os << "family,tv_mean,tv_se,hd_mean,hd_se,count,failures\n";
    for (const auto& r : b->rows)
      os << r.family << "," << fmt4(r.tv_mean) << "," << fmt4(r.tv_se) << "," << fmt4(r.hd_mean)
         << "," << fmt4(r.hd_se) << "," << r.count << "," << r.failures << "\n";
    fzr::io::atomic_write(path, os.str());
  });
}

void fzr_benchmark_free(fzr_benchmark* b) { delete b; }

}  // extern "C"
