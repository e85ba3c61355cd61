#include "jetfol/rng.hpp"

namespace jetfol {

mpz_class Rng::symmetric(const mpz_class& bound) {
  // rejection on 64-bit limbs
  mpz_class span = 2 * bound + 1;
  size_t bits = mpz_sizeinbase(span.get_mpz_t(), 2);
  while (true) {
    mpz_class r = 0;
    for (size_t got = 0; got < bits; got += 64) {
      r <<= 64;
      std::uint64_t w = next();
      mpz_class limb;
      mpz_import(limb.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
      r += limb;
    }
    mpz_class mask = (mpz_class(1) << bits) - 1;
    r &= mask;
    if (r < span) return r - bound;
  }
}

Rational grid_rational(Rng& rng, const Rational& bound, int grid_bits) {
  if (sgn(bound) <= 0) return Rational(0);
  for (int m = grid_bits;; ++m) {
    mpz_class scale = mpz_class(1) << m;
    Rational scaled = bound * scale;
    // largest integer c with c < bound * 2^m
    mpz_class c = scaled.get_num() / scaled.get_den();
    if (scaled.get_den() == 1) c -= 1;
    if (c >= 1) {
      Rational q(rng.symmetric(c), scale);
      q.canonicalize();
      return q;
    }
  }
}

}  // namespace jetfol
