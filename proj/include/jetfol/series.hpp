#pragma once

// Truncated bivariate power series in (x, y).
//
// A BiSeries of working order N is a series known modulo (x,y)^{N+1}.  Terms are
// kept sparse, sorted by (i+j, i), with zeros pruned.  Every operation computes
// the order up to which its output is determined by its inputs; nothing is ever
// read above a known order.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetfol/scalar.hpp"

namespace jetfol {

/// Position of x^i y^j in the (degree, i) ordering.
constexpr std::size_t mono_index(int i, int j) {
  const auto d = static_cast<std::size_t>(i + j);
  return d * (d + 1) / 2 + static_cast<std::size_t>(i);
}

/// Number of monomials of total degree <= n.
constexpr std::size_t mono_count(int n) {
  return n < 0 ? 0 : static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 2) / 2;
}

struct DegreeBand {
  int lo;  // exclusive
  int hi;  // inclusive

  DegreeBand(int lo_, int hi_) : lo(lo_), hi(hi_) {
    if (lo < 0 || hi <= lo)
      throw DomainError("degree band needs 0 <= lo < hi, got (" + std::to_string(lo) + ", " +
                        std::to_string(hi) + ")");
  }
  bool contains(int degree) const { return lo < degree && degree <= hi; }
};

template <class S>
class BiSeries {
 public:
  using Scalar = S;
  using Ring = ring_t<S>;

  struct Term {
    int i;
    int j;
    S c;
    int degree() const { return i + j; }
    friend bool operator==(const Term&, const Term&) = default;
  };

  BiSeries(Ring ring, int order) : ring_(std::move(ring)), order_(order) {
    if (order < 0) throw DomainError("negative working order");
  }

  /// Terms may come in any order; duplicates and terms above `order` are rejected.
  static BiSeries from_terms(Ring ring, int order, std::vector<Term> terms) {
    BiSeries f(std::move(ring), order);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      return mono_index(a.i, a.j) < mono_index(b.i, b.j);
    });
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const Term& tm = terms[t];
      if (tm.i < 0 || tm.j < 0) throw DomainError("negative exponent");
      if (tm.degree() > order)
        throw DomainError("term x^" + std::to_string(tm.i) + " y^" + std::to_string(tm.j) +
                          " exceeds working order " + std::to_string(order));
      if (t > 0 && terms[t - 1].i == tm.i && terms[t - 1].j == tm.j)
        throw DomainError("duplicate term x^" + std::to_string(tm.i) + " y^" + std::to_string(tm.j));
      if (!jetfol::is_zero(tm.c)) f.terms_.push_back(tm);
    }
    return f;
  }

  static BiSeries monomial(Ring ring, int order, int i, int j, S c) {
    return from_terms(std::move(ring), order, {Term{i, j, std::move(c)}});
  }
  static BiSeries constant(Ring ring, int order, S c) { return monomial(std::move(ring), order, 0, 0, std::move(c)); }
  static BiSeries x(Ring ring, int order) {
    auto one = ring.one();
    return from_terms(std::move(ring), order, order >= 1 ? std::vector<Term>{{1, 0, one}} : std::vector<Term>{});
  }
  static BiSeries y(Ring ring, int order) {
    auto one = ring.one();
    return from_terms(std::move(ring), order, order >= 1 ? std::vector<Term>{{0, 1, one}} : std::vector<Term>{});
  }

  /// Dense coefficient vector in mono_index order, length mono_count(n).
  static BiSeries from_dense(Ring ring, int order, const std::vector<S>& dense) {
    BiSeries f(std::move(ring), order);
    for (int d = 0; d <= order; ++d)
      for (int i = 0; i <= d; ++i) {
        const auto idx = mono_index(i, d - i);
        if (idx < dense.size() && !jetfol::is_zero(dense[idx])) f.terms_.push_back({i, d - i, dense[idx]});
      }
    return f;
  }

  const Ring& ring() const { return ring_; }
  int order() const { return order_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coeff(int i, int j) const {
    if (i + j > order_)
      throw DomainError("coefficient of degree " + std::to_string(i + j) + " requested from a jet of order " +
                        std::to_string(order_));
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mono_index(i, j),
                               [](const Term& t, std::size_t key) { return mono_index(t.i, t.j) < key; });
    if (it != terms_.end() && it->i == i && it->j == j) return it->c;
    return ring_.zero();
  }

  std::vector<S> dense(int n) const {
    std::vector<S> out(mono_count(n), ring_.zero());
    for (const auto& t : terms_)
      if (t.degree() <= n) out[mono_index(t.i, t.j)] = t.c;
    return out;
  }

  /// Same coefficients, declared known to a higher order.  Only sound where the
  /// caller can justify that the unknown terms cannot influence the result it
  /// extracts (e.g. the truncation invariance in compat).
  BiSeries padded_to(int order) const {
    if (order < order_) throw DomainError("padded_to cannot lower the order; use jet");
    BiSeries f = *this;
    f.order_ = order;
    return f;
  }

  friend bool operator==(const BiSeries& a, const BiSeries& b) {
    return a.ring_ == b.ring_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

  template <class T>
  friend class BiSeries;

 private:
  Ring ring_;
  int order_;
  std::vector<Term> terms_;
};

namespace detail {

template <class S>
void check_ring(const BiSeries<S>& f, const BiSeries<S>& g) {
  if (!(f.ring() == g.ring())) throw RingMismatch("series over " + f.ring().name() + " and " + g.ring().name());
}

}  // namespace detail

template <class S>
BiSeries<S> add(const BiSeries<S>& f, const BiSeries<S>& g) {
  detail::check_ring(f, g);
  const int n = std::min(f.order(), g.order());
  std::vector<typename BiSeries<S>::Term> out;
  auto a = f.terms().begin(), ae = f.terms().end();
  auto b = g.terms().begin(), be = g.terms().end();
  auto key = [](const auto& t) { return mono_index(t.i, t.j); };
  while (a != ae || b != be) {
    if (b == be || (a != ae && key(*a) < key(*b))) {
      if (a->degree() <= n) out.push_back(*a);
      ++a;
    } else if (a == ae || key(*b) < key(*a)) {
      if (b->degree() <= n) out.push_back(*b);
      ++b;
    } else {
      if (a->degree() <= n) out.push_back({a->i, a->j, a->c + b->c});
      ++a;
      ++b;
    }
  }
  return BiSeries<S>::from_terms(f.ring(), n, std::move(out));
}

template <class S>
BiSeries<S> scale(const BiSeries<S>& f, const S& c) {
  std::vector<typename BiSeries<S>::Term> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) out.push_back({t.i, t.j, t.c * c});
  return BiSeries<S>::from_terms(f.ring(), f.order(), std::move(out));
}

template <class S>
BiSeries<S> negate(const BiSeries<S>& f) {
  return scale(f, f.ring().from_int(-1));
}

template <class S>
BiSeries<S> sub(const BiSeries<S>& f, const BiSeries<S>& g) {
  return add(f, negate(g));
}

/// Product modulo (x,y)^{M+1}, M = min of the working orders.
template <class S>
BiSeries<S> mul(const BiSeries<S>& f, const BiSeries<S>& g) {
  detail::check_ring(f, g);
  const int n = std::min(f.order(), g.order());
  std::vector<S> acc(mono_count(n), f.ring().zero());
  for (const auto& a : f.terms()) {
    if (a.degree() > n) break;
    for (const auto& b : g.terms()) {
      if (a.degree() + b.degree() > n) break;
      const auto idx = mono_index(a.i + b.i, a.j + b.j);
      acc[idx] += a.c * b.c;
    }
  }
  return BiSeries<S>::from_dense(f.ring(), n, acc);
}

template <class S>
BiSeries<S> operator+(const BiSeries<S>& f, const BiSeries<S>& g) { return add(f, g); }
template <class S>
BiSeries<S> operator-(const BiSeries<S>& f, const BiSeries<S>& g) { return sub(f, g); }
template <class S>
BiSeries<S> operator*(const BiSeries<S>& f, const BiSeries<S>& g) { return mul(f, g); }
template <class S>
BiSeries<S> operator-(const BiSeries<S>& f) { return negate(f); }

/// J^N f.
template <class S>
BiSeries<S> jet(const BiSeries<S>& f, int n) {
  if (n > f.order())
    throw DomainError("jet of order " + std::to_string(n) + " requested from a series known to order " +
                      std::to_string(f.order()));
  if (n < 0) throw DomainError("negative jet order");
  std::vector<typename BiSeries<S>::Term> out;
  for (const auto& t : f.terms())
    if (t.degree() <= n) out.push_back(t);
  return BiSeries<S>::from_terms(f.ring(), n, std::move(out));
}

/// Terms with band.lo < i+j <= band.hi; keeps the input's working order.
template <class S>
BiSeries<S> band(const BiSeries<S>& f, const DegreeBand& b) {
  if (b.hi > f.order())
    throw DomainError("band up to degree " + std::to_string(b.hi) + " exceeds known order " +
                      std::to_string(f.order()));
  std::vector<typename BiSeries<S>::Term> out;
  for (const auto& t : f.terms())
    if (b.contains(t.degree())) out.push_back(t);
  return BiSeries<S>::from_terms(f.ring(), f.order(), std::move(out));
}

/// Degree-n homogeneous component (working order of the input is kept).
template <class S>
BiSeries<S> homogeneous_part(const BiSeries<S>& f, int n) {
  if (n > f.order())
    throw DomainError("homogeneous part of degree " + std::to_string(n) + " exceeds known order " +
                      std::to_string(f.order()));
  std::vector<typename BiSeries<S>::Term> out;
  for (const auto& t : f.terms())
    if (t.degree() == n) out.push_back(t);
  return BiSeries<S>::from_terms(f.ring(), f.order(), std::move(out));
}

template <class S>
BiSeries<S> partial_x(const BiSeries<S>& f) {
  if (f.order() < 1) throw DomainError("partial derivative of an order-0 jet");
  std::vector<typename BiSeries<S>::Term> out;
  for (const auto& t : f.terms())
    if (t.i > 0) out.push_back({t.i - 1, t.j, t.c * f.ring().from_int(t.i)});
  return BiSeries<S>::from_terms(f.ring(), f.order() - 1, std::move(out));
}

template <class S>
BiSeries<S> partial_y(const BiSeries<S>& f) {
  if (f.order() < 1) throw DomainError("partial derivative of an order-0 jet");
  std::vector<typename BiSeries<S>::Term> out;
  for (const auto& t : f.terms())
    if (t.j > 0) out.push_back({t.i, t.j - 1, t.c * f.ring().from_int(t.j)});
  return BiSeries<S>::from_terms(f.ring(), f.order() - 1, std::move(out));
}

/// Smallest total degree with a nonzero coefficient; nullopt for a zero jet
/// (whose order of vanishing is only known to exceed the working order).
template <class S>
std::optional<int> order_of_vanishing(const BiSeries<S>& f) {
  if (f.terms().empty()) return std::nullopt;
  return f.terms().front().degree();
}

/// Lower bound for the order of vanishing that is always valid: the order of
/// vanishing if known, else working order + 1.
template <class S>
int valuation_bound(const BiSeries<S>& f) {
  auto v = order_of_vanishing(f);
  return v ? *v : f.order() + 1;
}

/// Largest x-exponent among stored terms (-1 for zero).
template <class S>
int degree_in_x(const BiSeries<S>& f) {
  int d = -1;
  for (const auto& t : f.terms()) d = std::max(d, t.i);
  return d;
}

template <class S>
int degree_in_y(const BiSeries<S>& f) {
  int d = -1;
  for (const auto& t : f.terms()) d = std::max(d, t.j);
  return d;
}

/// f(u(x,y), v(x,y)); u, v must have zero constant term.  Output order is the
/// minimum of the three working orders.
template <class S>
BiSeries<S> compose(const BiSeries<S>& f, const BiSeries<S>& u, const BiSeries<S>& v) {
  detail::check_ring(f, u);
  detail::check_ring(f, v);
  if (!is_zero(u.coeff(0, 0)) || !is_zero(v.coeff(0, 0)))
    throw DomainError("compose: substituted series must vanish at the origin");
  const int n = std::min({f.order(), u.order(), v.order()});
  const auto& ring = f.ring();
  const int max_i = std::max(degree_in_x(f), 0);
  const int max_j = std::max(degree_in_y(f), 0);

  auto un = jet(u, n), vn = jet(v, n);
  // v^j for j <= min(max_j, n)
  std::vector<BiSeries<S>> vpow;
  vpow.push_back(BiSeries<S>::constant(ring, n, ring.one()));
  for (int j = 1; j <= std::min(max_j, n); ++j) vpow.push_back(mul(vpow.back(), vn));

  // g_i(v) = sum_j a_ij v^j, then Horner in u
  const int top = std::min(max_i, n);
  std::vector<std::vector<S>> g(top + 1, std::vector<S>(mono_count(n), ring.zero()));
  for (const auto& t : f.terms()) {
    if (t.degree() > n || t.i > top) continue;
    for (const auto& w : vpow[t.j].terms()) g[t.i][mono_index(w.i, w.j)] += t.c * w.c;
  }
  BiSeries<S> acc = BiSeries<S>::from_dense(ring, n, g[top]);
  for (int i = top - 1; i >= 0; --i) acc = add(mul(acc, un), BiSeries<S>::from_dense(ring, n, g[i]));
  return acc;
}

/// Coefficientwise image in another ring.
template <class T, class S, class F>
BiSeries<T> map_coeffs(const BiSeries<S>& f, ring_t<T> target, F&& fn) {
  std::vector<typename BiSeries<T>::Term> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) out.push_back({t.i, t.j, fn(t.c)});
  return BiSeries<T>::from_terms(std::move(target), f.order(), std::move(out));
}

/// Embeds f into R[t]/(t^2) with zero t-part.
template <class S>
BiSeries<Dual<S>> lift_dual(const BiSeries<S>& f) {
  DualRing<ring_t<S>> dr{f.ring()};
  auto zero = f.ring().zero();
  return map_coeffs<Dual<S>>(f, dr, [&](const S& c) { return Dual<S>(c, zero); });
}

/// a + t b for series a, b over S.
template <class S>
BiSeries<Dual<S>> make_dual(const BiSeries<S>& a, const BiSeries<S>& b) {
  const int n = std::min(a.order(), b.order());
  auto ad = a.dense(n), bd = b.dense(n);
  std::vector<Dual<S>> out;
  out.reserve(ad.size());
  for (std::size_t k = 0; k < ad.size(); ++k) out.emplace_back(ad[k], bd[k]);
  return BiSeries<Dual<S>>::from_dense(DualRing<ring_t<S>>{a.ring()}, n, out);
}

template <class S>
BiSeries<S> real_part(const BiSeries<Dual<S>>& f) {
  return map_coeffs<S>(f, f.ring().base, [](const Dual<S>& c) { return c.re(); });
}

template <class S>
BiSeries<S> dual_part(const BiSeries<Dual<S>>& f) {
  return map_coeffs<S>(f, f.ring().base, [](const Dual<S>& c) { return c.eps(); });
}

/// Reduction of a rational series mod p.
inline BiSeries<Fp> reduce_mod(const BiSeries<Rational>& f, const PrimeField& field) {
  return map_coeffs<Fp>(f, field, [&](const Rational& c) { return field.from_rational(c); });
}

}  // namespace jetfol
