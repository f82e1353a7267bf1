#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fogplan {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and up to two tags
// (e.g. CP count and replication index). Artifact reproducibility depends on
// this mapping staying fixed.
inline uint64_t mix_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
  uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return h;
}

// Deterministic random stream. mt19937_64 is fully specified by the standard,
// and all conversions below are implemented here instead of delegating to
// std::*_distribution (whose output is implementation-defined), so a seed
// produces the same draws on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // [0, 1) with 53 random bits
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // unbiased integer in [0, n) via rejection
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

  // standard normal via Box-Muller (one value per call, no cached state)
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Poisson draw by inversion with sequential search on the uniform stream.
  // Means above kChunk are drawn as sums of chunked draws so that exp(-mean)
  // stays representable; the result is still exactly Poisson(mean).
  long poisson(double mean) {
    long total = 0;
    while (mean > kChunk) {
      total += poisson_inv(kChunk);
      mean -= kChunk;
    }
    return total + poisson_inv(mean);
  }

  // Fisher-Yates, driven by below()
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  static constexpr double kChunk = 500.0;

  long poisson_inv(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    long k = 0;
    // cap guards against the cdf saturating just below u by rounding
    const long cap = static_cast<long>(mean + 60.0 * std::sqrt(mean) + 60.0);
    while (u > cdf && k < cap) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  std::mt19937_64 gen_;
};

}  // namespace fogplan
