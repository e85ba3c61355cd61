#include "jetfol/linalg.hpp"

#include <gmpxx.h>

namespace jetfol {

std::size_t bareiss_rank(const Matrix<Rational>& A) {
  const std::size_t R = A.rows(), C = A.cols();
  std::vector<std::vector<mpz_class>> m(R, std::vector<mpz_class>(C));
  for (std::size_t r = 0; r < R; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < C; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), A.at(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < C; ++c) m[r][c] = A.at(r, c).get_num() * (l / A.at(r, c).get_den());
  }
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < C && rank < R; ++c) {
    std::size_t best = R;
    for (std::size_t r = rank; r < R; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      if (best == R || mpz_cmpabs(m[r][c].get_mpz_t(), m[best][c].get_mpz_t()) < 0) best = r;
    }
    if (best == R) continue;
    std::swap(m[best], m[rank]);
    const mpz_class& piv = m[rank][c];
    for (std::size_t r = rank + 1; r < R; ++r) {
      const mpz_class f = m[r][c];
      for (std::size_t k = c + 1; k < C; ++k) {
        mpz_class v = piv * m[r][k] - f * m[rank][k];
        mpz_divexact(m[r][k].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m[r][c] = 0;
    }
    prev = piv;
    ++rank;
  }
  return rank;
}

std::optional<std::size_t> modular_rank(const Matrix<Rational>& A, std::uint32_t p) {
  PrimeField field(p);
  Matrix<Fp> m(field, A.rows(), A.cols());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < A.cols(); ++c) {
      const Rational& q = A.at(r, c);
      if (mpz_divisible_ui_p(q.get_den_mpz_t(), p)) return std::nullopt;
      m.at(r, c) = field.from_rational(q);
    }
  return rank_field(std::move(m));
}

}  // namespace jetfol
