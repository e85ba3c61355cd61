#include "jetfol/scalar.hpp"

#include <cctype>

namespace jetfol {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
    throw InputError("malformed rational \"" + std::string(text) + "\"");
  mpz_class n(std::string(num), 10);
  mpz_class d = slash == std::string_view::npos ? mpz_class(1) : mpz_class(std::string(den), 10);
  if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  if (text.front() == '-') n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& a) { return a.get_str(10); }

Fp Fp::inverse() const {
  if (v_ == 0) throw NotInvertible("inverse of 0 in F_" + std::to_string(p_));
  // extended Euclid on (v, p)
  long long r0 = p_, r1 = v_, t0 = 0, t1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    long long t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  return from_signed(p_, t0);
}

std::string to_string(const Fp& a) {
  return std::to_string(a.value()) + " mod " + std::to_string(a.modulus());
}

std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << to_string(a); }

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t prime) : p(prime) {
  if (prime >= (1u << 31) || !is_prime(prime))
    throw InputError("modulus " + std::to_string(prime) + " is not a prime below 2^31");
}

Fp PrimeField::from_rational(const Rational& q) const {
  mpz_class n = q.get_num() % p;
  mpz_class d = q.get_den() % p;
  if (d == 0)
    throw NotInvertible("denominator of " + to_string(q) + " vanishes mod " + std::to_string(p));
  if (n < 0) n += p;
  return Fp(p, n.get_ui()) / Fp(p, d.get_ui());
}

}  // namespace jetfol
