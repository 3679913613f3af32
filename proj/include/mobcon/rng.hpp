#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace mobcon {

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

// Seeded random stream. The (seed, stream) pair fully determines the draw
// sequence, so ensemble members get independent streams from one seed and any
// run can be replayed bit-exactly. Single-owner: do not share one handle
// across concurrent tasks.
//
// Engine is xoshiro256** with splitmix64 state expansion; all distribution
// sampling is done here rather than with std::<dist> so sequences do not
// depend on the standard library implementation.
class RngHandle {
 public:
  RngHandle() : RngHandle(0, 0) {}
  explicit RngHandle(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {
    uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& w : state_) w = detail::splitmix64(sm);
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // Child stream derived from (seed, stream, tag); used to decouple e.g.
  // intervention randomness from epidemic randomness.
  RngHandle split(uint64_t tag) const {
    uint64_t sm = stream_ ^ (0xd1b54a32d192ed03ULL * (tag + 1));
    return RngHandle(seed_, detail::splitmix64(sm));
  }

  // Same, with a readable tag (FNV-1a of the label).
  RngHandle split(std::string_view tag) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return split(h);
  }

  uint64_t next() {
    const uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // True iff a uniform [0,1) sample falls below p.
  bool bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p must be in [0,1]");
    return uniform() < p;
  }

  // Uniform integer in [0, n). n must be positive.
  uint64_t uniform_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Normal sample, Marsaglia polar method (no cached spare).
  double normal(double mean, double stddev) {
    if (stddev < 0.0) throw std::invalid_argument("normal: stddev must be >= 0");
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
  }

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t state_[4];
};

inline bool bernoulli(double p, RngHandle& rng) { return rng.bernoulli(p); }

}  // namespace mobcon
