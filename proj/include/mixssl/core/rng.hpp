#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mixssl {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seedable random stream with named sub-stream derivation. All distributions
// are implemented here (not via std:: distributions) so draws are identical
// across standard-library versions; reproducibility contracts rely on that.
//
// Streams are keyed: derive(k) returns an independent stream that is a pure
// function of (base seed, k). Training code keys every stream by semantic
// tags such as (seed, batch_index), which keeps results independent of
// prefetch or call order.
class RngStream {
public:
  explicit RngStream(uint64_t seed) : base_(seed), gen_(splitmix64(seed)) {}

  RngStream derive(uint64_t key) const {
    return RngStream(splitmix64(base_ ^ (0x9e3779b97f4a7c15ULL + splitmix64(key))));
  }

  RngStream derive(uint64_t k1, uint64_t k2) const { return derive(k1).derive(k2); }

  RngStream derive(uint64_t k1, uint64_t k2, uint64_t k3) const {
    return derive(k1).derive(k2).derive(k3);
  }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1). 53-bit mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int64_t uniform_int(int64_t n) {
    // Rejection-free modulo bias is negligible for n << 2^64, but keep it exact.
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return static_cast<int64_t>(r % un);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller (spare discarded to keep the stream layout
  // independent of call history).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Gamma(shape, 1) via Marsaglia-Tsang, with the alpha < 1 boost.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b). Beta(1, 1) short-circuits to a single uniform draw.
  double beta(double a, double b) {
    if (a == 1.0 && b == 1.0) return uniform();
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int64_t i = static_cast<int64_t>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(uniform_int(i + 1))]);
    }
  }

  uint64_t base_seed() const { return base_; }

private:
  uint64_t base_;
  std::mt19937_64 gen_;
};

}  // namespace mixssl
