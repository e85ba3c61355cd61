#pragma once

// Exact coefficient arithmetic: rationals (GMP), prime fields and dual numbers.
//
// Every scalar type S comes with a ring context type ring_t<S> that knows how to
// build constants (zero, one, integers, rationals) in that ring.  Contexts compare
// equal iff they describe the same ring instance; mixing two instances throws.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jetfol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands from different ring instances (e.g. F_5 and F_7).
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// Division by a non-invertible element.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// An operation was asked for something outside its domain (e.g. a jet
/// coefficient above the known order, |a| of a prime-field element).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (JSON, flags, invariants of loaded objects).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A resource guard tripped (enumeration too large, budget exhausted).
class GuardError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Rationals

using Rational = mpq_class;

inline bool is_zero(const Rational& a) { return sgn(a) == 0; }

/// Parses "p" or "p/q" (optional leading '-'), reducing to lowest terms.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when q == 1.
std::string to_string(const Rational& a);

/// |a| for rationals.
inline Rational abs_value(const Rational& a) { return abs(a); }

/// Any other scalar type has no archimedean absolute value.
template <class S>
Rational abs_value(const S&) {
  throw DomainError("abs_value: only defined for rational scalars");
}

struct RationalRing {
  using value_type = Rational;
  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  Rational from_int(long long v) const { return Rational(static_cast<long>(v)); }
  Rational from_rational(const Rational& q) const { return q; }
  std::string name() const { return "q"; }
  bool operator==(const RationalRing&) const = default;
};

// ---------------------------------------------------------------------------
// Prime fields

/// Element of F_p for a prime p < 2^31; carries its modulus.
class Fp {
 public:
  Fp() = default;
  Fp(std::uint32_t p, std::uint64_t v) : p_(p), v_(static_cast<std::uint32_t>(v % p)) {}

  static Fp from_signed(std::uint32_t p, long long v) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    return Fp(p, static_cast<std::uint64_t>(r));
  }

  std::uint32_t modulus() const { return p_; }
  std::uint32_t value() const { return v_; }

  Fp inverse() const;

  friend Fp operator+(Fp a, Fp b) {
    check(a, b);
    std::uint32_t s = a.v_ + b.v_;
    if (s >= a.p_) s -= a.p_;
    return raw(a.p_, s);
  }
  friend Fp operator-(Fp a, Fp b) {
    check(a, b);
    return raw(a.p_, a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_);
  }
  friend Fp operator*(Fp a, Fp b) {
    check(a, b);
    return raw(a.p_, static_cast<std::uint32_t>(
                         static_cast<std::uint64_t>(a.v_) * b.v_ % a.p_));
  }
  friend Fp operator/(Fp a, Fp b) {
    check(a, b);
    return a * b.inverse();
  }
  Fp operator-() const { return raw(p_, v_ == 0 ? 0 : p_ - v_); }
  Fp& operator+=(Fp b) { return *this = *this + b; }
  Fp& operator-=(Fp b) { return *this = *this - b; }
  Fp& operator*=(Fp b) { return *this = *this * b; }
  Fp& operator/=(Fp b) { return *this = *this / b; }

  friend bool operator==(Fp a, Fp b) { return a.p_ == b.p_ && a.v_ == b.v_; }

 private:
  static Fp raw(std::uint32_t p, std::uint32_t v) {
    Fp r;
    r.p_ = p;
    r.v_ = v;
    return r;
  }
  static void check(Fp a, Fp b) {
    if (a.p_ != b.p_)
      throw RingMismatch("F_" + std::to_string(a.p_) + " vs F_" + std::to_string(b.p_));
  }

  std::uint32_t p_ = 0;
  std::uint32_t v_ = 0;
};

inline bool is_zero(const Fp& a) { return a.value() == 0; }
std::string to_string(const Fp& a);
std::ostream& operator<<(std::ostream& os, const Fp& a);

bool is_prime(std::uint32_t n);

struct PrimeField {
  using value_type = Fp;
  std::uint32_t p = 0;

  PrimeField() = default;
  explicit PrimeField(std::uint32_t prime);

  Fp zero() const { return Fp(p, 0); }
  Fp one() const { return Fp(p, 1); }
  Fp from_int(long long v) const { return Fp::from_signed(p, v); }
  /// num/den mod p; throws NotInvertible if p divides den.
  Fp from_rational(const Rational& q) const;
  std::string name() const { return "fp:" + std::to_string(p); }
  bool operator==(const PrimeField&) const = default;
};

/// Default certification primes.
inline constexpr std::uint32_t kDefaultPrimes[] = {32003, 65521, 1000003};

/// Multiplicative inverse in a field; throws NotInvertible on zero.
inline Rational inverse(const Rational& a) {
  if (is_zero(a)) throw NotInvertible("division by zero rational");
  return Rational(1) / a;
}
inline Fp inverse(const Fp& a) { return a.inverse(); }


// ---------------------------------------------------------------------------
// Dual numbers a + b t with t^2 = 0

template <class S>
class Dual {
 public:
  Dual() = default;
  Dual(S re, S eps) : re_(std::move(re)), eps_(std::move(eps)) {}

  const S& re() const { return re_; }
  const S& eps() const { return eps_; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.re_ + b.re_, a.eps_ + b.eps_}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.re_ - b.re_, a.eps_ - b.eps_}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.re_ * b.re_, a.re_ * b.eps_ + a.eps_ * b.re_};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    if (is_zero(b.re_)) throw NotInvertible("dual number with zero base part");
    S inv = inverse(b.re_);
    S q = a.re_ * inv;
    return {q, (a.eps_ - q * b.eps_) * inv};
  }
  Dual operator-() const { return {-re_, -eps_}; }
  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }

  friend bool operator==(const Dual& a, const Dual& b) { return a.re_ == b.re_ && a.eps_ == b.eps_; }

 private:
  S re_{};
  S eps_{};
};

template <class S>
bool is_zero(const Dual<S>& a) {
  return is_zero(a.re()) && is_zero(a.eps());
}

template <class S>
std::string to_string(const Dual<S>& a) {
  return to_string(a.re()) + " + " + to_string(a.eps()) + "t";
}

template <class R>
struct DualRing {
  using value_type = Dual<typename R::value_type>;
  R base;

  value_type zero() const { return {base.zero(), base.zero()}; }
  value_type one() const { return {base.one(), base.zero()}; }
  value_type from_int(long long v) const { return {base.from_int(v), base.zero()}; }
  value_type from_rational(const Rational& q) const { return {base.from_rational(q), base.zero()}; }
  value_type make(typename R::value_type re, typename R::value_type eps) const {
    return {std::move(re), std::move(eps)};
  }
  std::string name() const { return "dual(" + base.name() + ")"; }
  bool operator==(const DualRing&) const = default;
};

// ---------------------------------------------------------------------------
// Scalar -> ring context

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  using Ring = RationalRing;
  static Ring ring_of(const Rational&) { return {}; }
  static constexpr bool is_field = true;
};

template <>
struct ScalarTraits<Fp> {
  using Ring = PrimeField;
  static Ring ring_of(const Fp& a) {
    PrimeField f;
    f.p = a.modulus();
    return f;
  }
  static constexpr bool is_field = true;
};

template <class S>
struct ScalarTraits<Dual<S>> {
  using Ring = DualRing<typename ScalarTraits<S>::Ring>;
  static Ring ring_of(const Dual<S>& a) { return {ScalarTraits<S>::ring_of(a.re())}; }
  static constexpr bool is_field = false;
};

template <class S>
using ring_t = typename ScalarTraits<S>::Ring;

inline Rational checked_div(const Rational& a, const Rational& b) { return a * inverse(b); }
inline Fp checked_div(const Fp& a, const Fp& b) { return a / b; }
template <class S>
Dual<S> checked_div(const Dual<S>& a, const Dual<S>& b) {
  return a / b;
}

}  // namespace jetfol
