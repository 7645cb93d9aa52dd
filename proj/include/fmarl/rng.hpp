#pragma once

#include <cmath>
#include <cstdint>

namespace fmarl {

// SplitMix64 finalizer. Used both for deriving substream seeds and as the
// simulation generator itself, so every result is reproducible bit-for-bit
// across platforms (no reliance on libstdc++ distribution internals).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream tags for derive_stream. Each (tag, index) pair names an independent
// substream of the master seed, so e.g. adding agents never perturbs the
// streams of existing ones.
enum class StreamTag : std::uint64_t {
  world = 1,
  agent_policy = 2,
  agent_init = 3,
  baseline = 4,
  fading = 5,
};

inline std::uint64_t derive_stream(std::uint64_t master, StreamTag tag,
                                   std::uint64_t index = 0) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (static_cast<std::uint64_t>(tag) * 0xD1342543DE82EF95ULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0xDABA0B6EB09322E3ULL);
  return splitmix64(s);
}

class Rng {
 public:
  Rng() = default;
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased index in [0, n); n must be > 0
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // standard normal via Box-Muller (one value per call)
  double normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // unit-mean exponential
  double exponential() { return -std::log(1.0 - uniform()); }

  std::uint64_t state() const { return state_; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::uint64_t state_ = 0x853C49E6748FEA9BULL;
};

}  // namespace fmarl
