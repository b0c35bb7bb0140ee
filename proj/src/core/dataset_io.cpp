#include "core/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace fzr::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& tok, int line_no, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    require(pos == tok.size() && std::isfinite(v), ErrorCode::parse, "");
    return v;
  } catch (...) {
    throw Error(ErrorCode::parse,
                "line " + std::to_string(line_no) + ": bad " + what + " value '" + tok + "'");
  }
}

void standardize(FuzzyDataset& data) {
  const int n = data.n();
  const int J = data.num_covariates();
  data.standardize_center.assign(J, 0.0);
  data.standardize_scale.assign(J, 1.0);
  for (int j = 1; j < J; ++j) {  // never touch the intercept
    const double mean = data.X.col(j).mean();
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += (data.X(i, j) - mean) * (data.X(i, j) - mean);
    const double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    if (sd > 0.0) {
      data.standardize_center[j] = mean;
      data.standardize_scale[j] = sd;
      for (int i = 0; i < n; ++i) data.X(i, j) = (data.X(i, j) - mean) / sd;
    }
  }
}

}  // namespace

FuzzyDataset read_dataset(const std::string& path, const IngestOptions& opts) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::parse, path + ": empty file");
  const std::vector<std::string> header = split_csv(line);
  require(!header.empty() && trim(header[0]) == "id", ErrorCode::parse,
          path + ": header must start with 'id'");

  size_t first_cov = 0;
  bool has_bounds_cols = false;
  if (opts.format == DataFormat::beta_fuzzy) {
    require(header.size() >= 3 && trim(header[1]) == "m" && trim(header[2]) == "s",
            ErrorCode::parse, path + ": beta-fuzzy header must be id,m,s[,lb,ub],x...");
    has_bounds_cols = header.size() >= 5 && trim(header[3]) == "lb" && trim(header[4]) == "ub";
    first_cov = has_bounds_cols ? 5 : 3;
  } else {
    require(header.size() >= 5 && trim(header[1]) == "a1" && trim(header[2]) == "a2" &&
                trim(header[3]) == "a3" && trim(header[4]) == "a4",
            ErrorCode::parse, path + ": trapezoidal header must be id,a1,a2,a3,a4,x...");
    first_cov = 5;
  }
  const int n_cov = static_cast<int>(header.size() - first_cov);

  FuzzyDataset data;
  std::vector<std::vector<double>> covs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> tok = split_csv(line);
    require(tok.size() == header.size(), ErrorCode::parse,
            "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                " fields, found " + std::to_string(tok.size()));
    data.ids.push_back(trim(tok[0]));
    FuzzyObservation obs{};
    if (opts.format == DataFormat::beta_fuzzy) {
      obs.m = parse_num(tok[1], line_no, "m");
      obs.s = parse_num(tok[2], line_no, "s");
      if (has_bounds_cols) {
        obs.lb = parse_num(tok[3], line_no, "lb");
        obs.ub = parse_num(tok[4], line_no, "ub");
      } else {
        require(opts.lb.has_value() && opts.ub.has_value(), ErrorCode::invalid_argument,
                path + ": no lb/ub columns and no default bounds configured");
        obs.lb = *opts.lb;
        obs.ub = *opts.ub;
      }
      require(obs.lb < obs.ub, ErrorCode::parse,
              "line " + std::to_string(line_no) + ": need lb < ub");
      require(obs.m > obs.lb && obs.m < obs.ub, ErrorCode::parse,
              "line " + std::to_string(line_no) + ": mode outside (lb, ub)");
      require(obs.s > 0, ErrorCode::parse,
              "line " + std::to_string(line_no) + ": precision must be positive");
    } else {
      const double a1 = parse_num(tok[1], line_no, "a1");
      const double a2 = parse_num(tok[2], line_no, "a2");
      const double a3 = parse_num(tok[3], line_no, "a3");
      const double a4 = parse_num(tok[4], line_no, "a4");
      try {
        const TrapezoidalFuzzyNumber tp(a1, a2, a3, a4);
        const ConversionResult conv = trapezoid_to_beta(tp);
        obs = {conv.fn.m, conv.fn.s, conv.fn.lb, conv.fn.ub};
      } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    data.obs.push_back(obs);
    std::vector<double> row(n_cov);
    for (int j = 0; j < n_cov; ++j)
      row[j] = parse_num(tok[first_cov + j], line_no, trim(header[first_cov + j]));
    covs.push_back(std::move(row));
  }
  require(!data.obs.empty(), ErrorCode::parse, path + ": no data rows");

  const int n = data.n();
  data.X.resize(n, n_cov + 1);
  data.X.col(0).setOnes();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n_cov; ++j) data.X(i, j + 1) = covs[i][j];
  data.covariate_names.resize(n_cov + 1);
  data.covariate_names[0] = "intercept";
  for (int j = 0; j < n_cov; ++j) data.covariate_names[j + 1] = trim(header[first_cov + j]);

  if (opts.lb && opts.ub) {
    data.lb = *opts.lb;
    data.ub = *opts.ub;
  } else {
    auto b = derive_bounds(data.obs);
    if (opts.widen_for_unbounded) b = widen_bounds(b);
    data.lb = b.first;
    data.ub = b.second;
  }
  require(data.lb < data.ub, ErrorCode::invalid_argument, path + ": degenerate model bounds");
  for (int i = 0; i < n; ++i)
    require(data.obs[i].m > data.lb && data.obs[i].m < data.ub, ErrorCode::invalid_argument,
            "row " + std::to_string(i + 1) + ": mode outside the model bounds");
  if (opts.standardize) standardize(data);
  return data;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset(const FuzzyDataset& data, const std::string& path) {
  std::ostringstream os;
  os << "id,m,s,lb,ub";
  for (size_t j = 1; j < data.covariate_names.size(); ++j) os << "," << data.covariate_names[j];
  os << "\n";
  for (int i = 0; i < data.n(); ++i) {
    os << data.ids[i] << "," << format_double(data.obs[i].m) << "," << format_double(data.obs[i].s)
       << "," << format_double(data.obs[i].lb) << "," << format_double(data.obs[i].ub);
    for (int j = 1; j < data.num_covariates(); ++j) os << "," << format_double(data.X(i, j));
    os << "\n";
  }
  atomic_write(path, os.str());
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, ErrorCode::parse,
            path + " line " + std::to_string(line_no) + ": expected key=value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

void write_config(const std::map<std::string, std::string>& kv, const std::string& path) {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
  atomic_write(path, os.str());
}

void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(out.good(), ErrorCode::io, "cannot write " + tmp);
    out << contents;
    out.flush();
    require(out.good(), ErrorCode::io, "write failed on " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::io,
          "cannot move " + tmp + " into place");
}

}  // namespace fzr::io
