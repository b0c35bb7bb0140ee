#ifndef FZR_CORE_BENCHMARK_HPP
#define FZR_CORE_BENCHMARK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/dists.hpp"

namespace fzr::bench {

// One latent-outcome family row: distances between the exact conditional of
// the latent outcome given a generated fuzzy observation and its fitted
// four-parameter Beta proposal, averaged over the family's parameter grid,
// the Gamma fuzziness grid and `reps` repetitions of the generative draw.
struct Row {
  std::string family;
  double tv_mean = 0.0, tv_se = 0.0;
  double hd_mean = 0.0, hd_se = 0.0;
  long count = 0;     // distance pairs included
  long failures = 0;  // generative draws whose fit raised an error (excluded)
};

std::vector<Row> run(int reps, std::uint64_t seed, int threads = 0);

// Distances for one fitted case; exposed for tests.
struct CaseDistances {
  double tv, hd;
  bool fallback;
};
CaseDistances approximation_distances(const dists::Density& fy, double m, double s);

}  // namespace fzr::bench

#endif
