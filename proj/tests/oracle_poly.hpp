#pragma once

// Untruncated polynomial arithmetic over Q on std::map, used only as a test
// oracle.  Shares nothing with the library's series code.

#include <map>
#include <utility>

#include "jetfol/series.hpp"

namespace oracle {

using jetfol::Rational;
using Poly = std::map<std::pair<int, int>, Rational>;

inline void prune(Poly& p) {
  for (auto it = p.begin(); it != p.end();) it = (sgn(it->second) == 0) ? p.erase(it) : std::next(it);
}

inline Poly add(Poly a, const Poly& b, const Rational& s = 1) {
  for (const auto& [k, v] : b) a[k] += s * v;
  prune(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) out[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  prune(out);
  return out;
}

inline Poly power(const Poly& a, int n) {
  Poly out{{{0, 0}, Rational(1)}};
  for (int k = 0; k < n; ++k) out = mul(out, a);
  return out;
}

/// f(u, v) by expanding every monomial separately.
inline Poly substitute(const Poly& f, const Poly& u, const Poly& v) {
  Poly out;
  for (const auto& [k, c] : f) out = add(out, mul(power(u, k.first), power(v, k.second)), c);
  return out;
}

inline Poly dx(const Poly& f) {
  Poly out;
  for (const auto& [k, c] : f)
    if (k.first > 0) out[{k.first - 1, k.second}] += c * k.first;
  prune(out);
  return out;
}

inline Poly dy(const Poly& f) {
  Poly out;
  for (const auto& [k, c] : f)
    if (k.second > 0) out[{k.first, k.second - 1}] += c * k.second;
  prune(out);
  return out;
}

inline Poly truncate(const Poly& f, int n) {
  Poly out;
  for (const auto& [k, c] : f)
    if (k.first + k.second <= n) out[k] = c;
  return out;
}

inline Poly from_series(const jetfol::BiSeries<Rational>& f) {
  Poly out;
  for (const auto& t : f.terms()) out[{t.i, t.j}] = t.c;
  return out;
}

/// True iff the series equals p truncated to the series' order.
inline bool agrees(const jetfol::BiSeries<Rational>& f, const Poly& p) {
  return from_series(f) == truncate(p, f.order());
}

}  // namespace oracle
