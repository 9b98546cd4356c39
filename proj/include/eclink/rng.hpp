#pragma once

#include <cstdint>

namespace eclink {

// splitmix64 stream. std:: distributions are implementation-defined, so all
// sampling is done by hand to keep generated datasets byte-identical across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, n), n > 0
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  // Derives an independent stream; used for per-actor generation.
  Rng fork(std::uint64_t stream) const {
    Rng child(state_ ^ (0x5851f42d4c957f2dULL * (stream + 1)));
    child.next();
    return child;
  }

 private:
  std::uint64_t state_;
};

// Bounded discrete power law on [min_value, max_value]; alpha > 0 controls
// tail heaviness (larger = lighter tail).
struct TailDistribution {
  std::uint32_t min_value = 1;
  std::uint32_t max_value = 1;
  double alpha = 1.5;
};

std::uint32_t sample_tail(Rng& rng, const TailDistribution& dist);

}  // namespace eclink
