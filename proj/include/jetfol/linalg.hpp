#pragma once

// Dense exact linear algebra: elimination over a field, affine solving,
// fraction-free rank over Q and rank modulo a prime.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jetfol/scalar.hpp"

namespace jetfol {

template <class S>
class Matrix {
 public:
  using Ring = ring_t<S>;

  Matrix(Ring ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, ring_.zero()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Ring& ring() const { return ring_; }

  S& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void set_column(std::size_t c, const std::vector<S>& v) {
    for (std::size_t r = 0; r < rows_; ++r) at(r, c) = r < v.size() ? v[r] : ring_.zero();
  }
  std::vector<S> column(std::size_t c) const {
    std::vector<S> v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
  }

  /// Columns listed in `cols`, in that order.
  Matrix select_columns(const std::vector<std::size_t>& cols) const {
    Matrix m(ring_, rows_, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < rows_; ++r) m.at(r, c) = at(r, cols[c]);
    return m;
  }

  /// Rows in [lo, hi).
  Matrix row_block(std::size_t lo, std::size_t hi) const {
    Matrix m(ring_, hi - lo, cols_);
    for (std::size_t r = lo; r < hi; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m.at(r - lo, c) = at(r, c);
    return m;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!jetfol::is_zero(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<S> data_;
};

template <class S>
std::vector<S> mat_vec(const Matrix<S>& A, const std::vector<S>& x) {
  std::vector<S> y(A.rows(), A.ring().zero());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < A.cols(); ++c)
      if (!is_zero(x[c])) y[r] += A.at(r, c) * x[c];
  return y;
}

/// Reduced row echelon form in place; returns pivot columns.
template <class S>
std::vector<std::size_t> rref_in_place(Matrix<S>& A) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < A.cols() && row < A.rows(); ++c) {
    std::size_t p = row;
    while (p < A.rows() && is_zero(A.at(p, c))) ++p;
    if (p == A.rows()) continue;
    if (p != row)
      for (std::size_t k = 0; k < A.cols(); ++k) std::swap(A.at(p, k), A.at(row, k));
    const S inv = inverse(A.at(row, c));
    for (std::size_t k = c; k < A.cols(); ++k) A.at(row, k) *= inv;
    for (std::size_t r = 0; r < A.rows(); ++r) {
      if (r == row || is_zero(A.at(r, c))) continue;
      const S f = A.at(r, c);
      for (std::size_t k = c; k < A.cols(); ++k)
        if (!is_zero(A.at(row, k))) A.at(r, k) -= f * A.at(row, k);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

/// Rank over a field by Gaussian elimination.
template <class S>
std::size_t rank_field(Matrix<S> A) {
  return rref_in_place(A).size();
}

template <class S>
struct AffineSolution {
  bool consistent = false;
  std::vector<S> particular;
  std::vector<std::vector<S>> kernel;
};

/// All x with A x = b.
template <class S>
AffineSolution<S> solve_affine(const Matrix<S>& A, const std::vector<S>& b) {
  const auto& ring = A.ring();
  const std::size_t n = A.cols();
  Matrix<S> aug(ring, A.rows(), n + 1);
  for (std::size_t r = 0; r < A.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = A.at(r, c);
    aug.at(r, n) = b[r];
  }
  auto piv = rref_in_place(aug);
  AffineSolution<S> sol;
  if (!piv.empty() && piv.back() == n) return sol;
  sol.consistent = true;
  sol.particular.assign(n, ring.zero());
  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < piv.size(); ++i) {
    is_pivot[piv[i]] = true;
    sol.particular[piv[i]] = aug.at(i, n);
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<S> v(n, ring.zero());
    v[f] = ring.one();
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -aug.at(i, f);
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

/// Vectors of `space` completing a basis of span(sub) to a basis of
/// span(sub) + span(space).
template <class S>
std::vector<std::vector<S>> complement_basis(const std::vector<std::vector<S>>& space,
                                             const std::vector<std::vector<S>>& sub, const ring_t<S>& ring) {
  if (space.empty()) return {};
  const std::size_t n = space.front().size();
  std::vector<std::vector<S>> echelon;  // reduced rows with recorded pivots
  std::vector<std::size_t> pivots;
  auto reduce = [&](std::vector<S> v) {
    for (std::size_t i = 0; i < echelon.size(); ++i) {
      const auto p = pivots[i];
      if (is_zero(v[p])) continue;
      const S f = v[p];
      for (std::size_t k = 0; k < n; ++k) v[k] -= f * echelon[i][k];
    }
    return v;
  };
  auto insert = [&](const std::vector<S>& v0) {
    auto v = reduce(v0);
    std::size_t p = 0;
    while (p < n && is_zero(v[p])) ++p;
    if (p == n) return false;
    const S inv = inverse(v[p]);
    for (auto& e : v) e *= inv;
    echelon.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  };
  for (const auto& g : sub) insert(g);
  std::vector<std::vector<S>> out;
  for (const auto& v : space)
    if (insert(v)) out.push_back(v);
  (void)ring;
  return out;
}

/// Rank over Q by fraction-free (Bareiss) elimination on the integer matrix
/// obtained by clearing row denominators.  Pivot: leftmost column, entry of
/// smallest absolute value.
std::size_t bareiss_rank(const Matrix<Rational>& A);

/// Rank of A mod p; nullopt when p divides some denominator.
std::optional<std::size_t> modular_rank(const Matrix<Rational>& A, std::uint32_t p);

inline Matrix<Fp> reduce_mod(const Matrix<Rational>& A, const PrimeField& field) {
  Matrix<Fp> m(field, A.rows(), A.cols());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < A.cols(); ++c) m.at(r, c) = field.from_rational(A.at(r, c));
  return m;
}

}  // namespace jetfol
