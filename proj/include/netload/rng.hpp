#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace netload {

// Deterministic random stream. Distribution transforms are implemented here
// rather than taken from <random> so that a given seed produces the same
// sequence on every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // a couple of warm-up scrambles so nearby seeds decorrelate
    next_u64();
    next_u64();
  }

  // splitmix64 step
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller, one spare cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // uniform integer in [0, bound); bound > 0
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

  // derive an independent stream for a named sub-task
  Rng fork(std::uint64_t stream_id) const {
    Rng child(state_ ^ (0xd1342543de82ef95ULL * (stream_id + 1)));
    return child;
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates shuffle driven by the portable stream above.
template <typename Vec>
void shuffle(Vec& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace netload
