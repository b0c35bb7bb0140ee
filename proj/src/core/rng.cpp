#include "core/rng.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace fzr {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t key) : key_(key), gen_(splitmix64(key)) {}

RngStream RngStream::substream(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t k = splitmix64(key_ ^ splitmix64(a + 0x51ed2701));
  k = splitmix64(k ^ splitmix64(b + 0xb4932748));
  return RngStream(k);
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586 * u2);
}

double RngStream::gamma(double shape, double scale) {
  require(shape > 0.0 && scale > 0.0, ErrorCode::invalid_argument, "gamma: bad parameters");
  if (shape < 1.0) {
    // Boost by one: G(a) = G(a+1) * U^(1/a).
    const double u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(1.0 - u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

double RngStream::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

}  // namespace fzr
