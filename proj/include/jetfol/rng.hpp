#pragma once

// Seeded randomness.  All sampling goes through Rng so that a single 64-bit seed
// reproduces every certificate.  The engine is std::mt19937_64 (its output
// sequence is fixed by the C++ standard); bounded integers are drawn by rejection
// sampling on the raw 64-bit outputs, never through <random> distributions,
// whose algorithms are implementation-defined.

#include <cstdint>
#include <initializer_list>
#include <random>

#include "jetfol/scalar.hpp"

namespace jetfol {

inline constexpr const char* kRngName = "mt19937_64/rejection-v1";

/// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Sub-seed for a named sub-stream, e.g. derive_seed(seed, {stage, retry}).
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = mix64(seed);
  for (auto t : tags) s = mix64(s ^ mix64(t + 0x632be59bd9b4e019ULL));
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do r = engine_();
    while (r >= limit);
    return r % n;
  }

  /// Uniform in [lo, hi].
  long long between(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform integer in [-bound, bound] (mpz, for large bounds).
  mpz_class symmetric(const mpz_class& bound);

  Fp element(std::uint32_t p) { return Fp(p, below(p)); }

 private:
  std::mt19937_64 engine_;
};

/// c / 2^m with c uniform among integers satisfying |c| / 2^m < bound.  m starts
/// at grid_bits and is increased until the grid has a nonzero point.
Rational grid_rational(Rng& rng, const Rational& bound, int grid_bits = 16);

/// Small random coefficient: an integer in [-bound, bound] over Q, a uniform
/// element over F_p.
inline Rational draw_scalar(Rng& rng, const RationalRing&, int bound = 3) { return Rational(static_cast<long>(rng.between(-bound, bound))); }
inline Fp draw_scalar(Rng& rng, const PrimeField& field, int = 3) { return rng.element(field.p); }

}  // namespace jetfol
