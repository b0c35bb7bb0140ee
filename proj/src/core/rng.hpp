#ifndef FZR_CORE_RNG_HPP
#define FZR_CORE_RNG_HPP

#include <cstdint>
#include <random>

namespace fzr {

// Deterministic stream of doubles with splittable substreams. Substreams are
// derived from the stream's key, not its state, so the draw order in one
// stream never affects another: chains, replicates and units get independent
// reproducible streams from one master seed.
//
// All samplers consume uniforms from here directly (no std::*_distribution),
// keeping sequences identical across standard libraries.
class RngStream {
public:
  explicit RngStream(std::uint64_t key);

  RngStream substream(std::uint64_t a, std::uint64_t b = 0) const;

  std::uint64_t key() const { return key_; }

  double uniform();              // [0, 1)
  double normal();               // standard normal, Box-Muller (2 uniforms per draw)
  double gamma(double shape, double scale);
  double beta(double a, double b);
  std::uint64_t next_u64();

private:
  std::uint64_t key_;
  std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fzr

#endif
