#pragma once

// Counter-derivable random streams. Every random draw in the library comes
// from a SplitMix64 stream whose seed is a hash of a (seed, purpose, indices)
// path, so any single graph or fault trial can be replayed in isolation.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace netbreak {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash of an index path into a 64-bit stream key.
constexpr std::uint64_t derive_stream(std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (const std::uint64_t v : path) h = mix64(h ^ mix64(v + 0x9e3779b97f4a7c15ULL));
  return h;
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with
  /// rejection). Platform independent, unlike std::uniform_int_distribution.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

namespace streams {

inline constexpr std::uint64_t kGraphDomain = 1;
inline constexpr std::uint64_t kFaultDomain = 2;

/// Stream for the graph_index-th ensemble sample of a run.
constexpr std::uint64_t graph(std::uint64_t seed, std::uint64_t graph_index) {
  return derive_stream({seed, kGraphDomain, graph_index});
}

/// Stream for one fault trial on one graph at one grid point.
constexpr std::uint64_t fault(std::uint64_t seed, std::uint64_t graph_index,
                              std::uint64_t eps_index, std::uint64_t trial) {
  return derive_stream({seed, kFaultDomain, graph_index, eps_index, trial});
}

}  // namespace streams

}  // namespace netbreak
