#pragma once

#include <cstdint>

namespace klsat {

// SplitMix64 (Vigna, public domain): one add + three xor-shift-multiply
// steps per draw. The generator is pinned by these few lines, independent
// of any standard-library engine, so instance streams are reproducible
// across compilers and standard libraries. std::uniform_*_distribution is
// avoided everywhere for the same reason: its output is implementation
// defined.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw from [0, bound) by multiply-shift rejection
  // (Lemire). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::uint64_t state_;
};

// Named substreams of one user-facing seed. Distinct tags give streams that
// behave as unrelated generators; the same (seed, tag) always replays the
// same stream. Instance topology, template choices and weight draws use
// separate tags so one can be varied or replayed without disturbing the
// others.
enum class Stream : std::uint64_t {
  topology = 1,
  template_choice = 2,
  weights = 3,
  graph_edges = 4,
  graph_weights = 5,
  roots = 6,
  galton_watson = 7,
  perturb = 8,
};

inline Rng substream(std::uint64_t seed, Stream tag) {
  return Rng(mix64(seed ^ mix64(static_cast<std::uint64_t>(tag))));
}

}  // namespace klsat
