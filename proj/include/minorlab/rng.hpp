#pragma once

/**
 * Reproducible random streams.
 *
 * Every sampler in the library draws from an RngStream identified by
 * (master_seed, stream_index).  The per-stream engine seed is derived by a
 * counter-style splitmix64 chain, so streams with distinct indices are
 * decorrelated and a replicate's output never depends on how many worker
 * threads ran beside it.  All variate transforms are implemented here in
 * closed form (no std::*_distribution), which keeps sequences identical
 * across standard library implementations.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace minorlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Engine seed for stream `index` under `master_seed`.  Two mixing rounds on
// top of the index keep nearby indices statistically unrelated.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index + 0x9e3779b97f4a7c15ULL);
  std::uint64_t b = splitmix64(s);
  splitmix64(s);
  return b ^ splitmix64(s);
}

// Disjoint master seeds for the independent sides of one experiment
// (e.g. matrix draws vs. path draws) under a single configured seed.
inline std::uint64_t domain_seed(std::uint64_t master_seed, std::uint64_t domain) {
  std::uint64_t s = master_seed ^ (0xd1b54a32d192ed03ULL * (domain + 1));
  splitmix64(s);
  return splitmix64(s);
}

/**
 * Standard normal quantile function (Wichura's PPND16 rational
 * approximations, |error| < 1e-15 over (0,1)).  Used instead of
 * std::normal_distribution so that Gaussian sequences are frozen.
 */
inline double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_icdf: p must lie in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return (q < 0.0) ? -val : val;
}

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed),
        stream_index_(stream_index),
        engine_(derive_stream_seed(master_seed, stream_index)) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_icdf(uniform01()); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("uniform_below: n must be positive");
    // Multiply-shift map of a 64-bit draw; bias is O(n / 2^64), negligible
    // for the index ranges used here and fully deterministic.
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(engine_()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(wide >> 64);
  }

  // Geometric count of successes before failure: P(W = m) = q^m (1-q), m >= 0.
  std::uint64_t geometric(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("geometric: q must lie in (0,1)");
    const double u = uniform01();
    const double w = std::floor(std::log(u) / std::log(q));
    if (w < 0.0) return 0;
    if (w > 9.0e18) throw std::overflow_error("geometric: draw out of range");
    return static_cast<std::uint64_t>(w);
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

}  // namespace minorlab
