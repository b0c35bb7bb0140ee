#ifndef FZR_CORE_DATASET_IO_HPP
#define FZR_CORE_DATASET_IO_HPP

#include <map>
#include <optional>
#include <string>

#include "core/model.hpp"

namespace fzr::io {

enum class DataFormat { beta_fuzzy, trapezoidal };

struct IngestOptions {
  DataFormat format = DataFormat::beta_fuzzy;
  std::optional<double> lb, ub;  // model bounds; default for rows without lb/ub columns
  bool standardize = true;       // z-score non-constant covariate columns
  bool widen_for_unbounded = false;  // apply the 1% margin to derived bounds
};

// Read a fuzzy dataset. Beta-fuzzy format: header id,m,s[,lb,ub],x1..xJ.
// Trapezoidal format: header id,a1,a2,a3,a4,x1..xJ (converted on ingest).
// An intercept column is prepended; covariates are z-scored unless disabled,
// with the transform recorded on the dataset.
FuzzyDataset read_dataset(const std::string& path, const IngestOptions& opts);

// Beta-fuzzy CSV with per-observation bounds; 17 significant digits so a
// write/ingest round trip is exact.
void write_dataset(const FuzzyDataset& data, const std::string& path);

// Flat key=value configuration file ('#' comments, blank lines ignored).
std::map<std::string, std::string> read_config(const std::string& path);
void write_config(const std::map<std::string, std::string>& kv, const std::string& path);

// Write-to-temp-then-rename.
void atomic_write(const std::string& path, const std::string& contents);

std::string format_double(double v);  // shortest round-trip decimal (17 sig digits)

}  // namespace fzr::io

#endif
