#pragma once

// Lowest-order data of a compatible pair: w1^nu ^ w2^nu = 0 forces
// w_i^nu = H_i * eta for a common homogeneous form eta of degree mu <= nu.
// A stratum fixes mu and the x- and y-degree allowances of eta; the chart
// bounds then limit H_1 (x-degree) and H_2 (y-degree).

#include <string>
#include <vector>

#include "jetfol/forms.hpp"
#include "jetfol/rng.hpp"

namespace jetfol {

struct LeadingStratum {
  int k = 0;
  int nu = 0;
  int mu = 0;  ///< degree of eta
  int ex = 0;  ///< max x-exponent in eta
  int ey = 0;  ///< max y-exponent in eta
  bool radial = false;

  struct Mono {
    int i;
    int j;
  };
  std::vector<Mono> eta_monos;  ///< monomials allowed in each component of eta
  std::vector<Mono> h1_monos;
  std::vector<Mono> h2_monos;

  /// Coordinates: eta_P, eta_Q, H1, H2 (the radial stratum has eta fixed).
  int param_count() const {
    return (radial ? 0 : 2 * static_cast<int>(eta_monos.size())) + static_cast<int>(h1_monos.size()) +
           static_cast<int>(h2_monos.size());
  }
  std::string label() const {
    if (radial) return "radial";
    return "mu=" + std::to_string(mu) + ",ex=" + std::to_string(ex) + ",ey=" + std::to_string(ey);
  }
};

namespace detail {

inline std::vector<LeadingStratum::Mono> monos(int degree, int max_i, int max_j) {
  std::vector<LeadingStratum::Mono> out;
  for (int i = 0; i <= degree; ++i)
    if (i <= max_i && degree - i <= max_j) out.push_back({i, degree - i});
  return out;
}

}  // namespace detail

/// Every nonzero pair with w1^nu ^ w2^nu = 0 and the chart bounds lies in one
/// of these families (up to the choice of eta within its gcd class).
inline std::vector<LeadingStratum> enumerate_leading_strata(int k, int nu) {
  if (k < 0 || nu < 0) throw DomainError("type (k, nu) must be non-negative");
  std::vector<LeadingStratum> out;
  for (int mu = 0; mu <= nu; ++mu)
    for (int ex = 0; ex <= std::min(k, mu); ++ex)
      for (int ey = 0; ey <= std::min(k, mu); ++ey) {
        if (ex + ey < mu) continue;
        LeadingStratum s;
        s.k = k;
        s.nu = nu;
        s.mu = mu;
        s.ex = ex;
        s.ey = ey;
        s.eta_monos = detail::monos(mu, ex, ey);
        s.h1_monos = detail::monos(nu - mu, k - ex, nu - mu);
        s.h2_monos = detail::monos(nu - mu, nu - mu, k - ey);
        out.push_back(std::move(s));
      }
  if (nu >= 1 && k >= 1) {
    LeadingStratum s;
    s.k = k;
    s.nu = nu;
    s.mu = 1;
    s.ex = 1;
    s.ey = 1;
    s.radial = true;
    s.h1_monos = detail::monos(nu - 1, k - 1, nu - 1);
    s.h2_monos = detail::monos(nu - 1, nu - 1, k - 1);
    out.push_back(std::move(s));
  }
  return out;
}

/// The pair (H1 eta, H2 eta) at the given coordinates, as jets of order `order`.
template <class S>
std::pair<RawForm<S>, RawForm<S>> stratum_point(const LeadingStratum& s, const std::vector<S>& v,
                                                const ring_t<S>& ring, int order) {
  if (static_cast<int>(v.size()) != s.param_count()) throw DomainError("stratum coordinates have wrong length");
  if (order < s.nu) throw DomainError("stratum point needs order >= nu");
  using Term = typename BiSeries<S>::Term;
  std::size_t pos = 0;
  auto take = [&](const std::vector<LeadingStratum::Mono>& ms) {
    std::vector<Term> t;
    for (const auto& m : ms) t.push_back({m.i, m.j, v[pos++]});
    return BiSeries<S>::from_terms(ring, order, std::move(t));
  };
  RawForm<S> eta = RawForm<S>::zero(ring, order);
  if (s.radial) {
    eta.P = BiSeries<S>::monomial(ring, order, 0, 1, -ring.one());
    eta.Q = BiSeries<S>::monomial(ring, order, 1, 0, ring.one());
  } else {
    eta.P = take(s.eta_monos);
    eta.Q = take(s.eta_monos);
  }
  auto H1 = take(s.h1_monos);
  auto H2 = take(s.h2_monos);
  return {multiply(H1, eta), multiply(H2, eta)};
}

/// Random nonzero point of a stratum; `mask` (if nonempty) forces the masked-out
/// coordinates to zero.
template <class S, class Draw>
std::pair<RawForm<S>, RawForm<S>> sample_stratum(const LeadingStratum& s, const ring_t<S>& ring, int order,
                                                 Draw&& draw, const std::vector<bool>& mask = {}) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<S> v;
    for (int c = 0; c < s.param_count(); ++c)
      v.push_back(mask.empty() || mask[c] ? draw() : ring.zero());
    auto pr = stratum_point(s, v, ring, order);
    if (!pr.first.is_zero() && !pr.second.is_zero()) return pr;
  }
  throw DomainError("could not sample a nonzero point of stratum " + s.label());
}

/// True if some stratum contains the pair: checked through the gcd
/// factorization of the first form.
template <class S>
bool stratum_covers(const std::vector<LeadingStratum>& strata, const RawForm<S>& w1, const RawForm<S>& w2, int k,
                    int nu) {
  auto lp = leading_pair_parametrize(w1, nu, w2, nu);
  if (!lp) return false;
  // eta = (eta_P, eta_Q) with gcd 1; H_i of degree nu - mu
  const int mu = nu - lp->H1.degree;
  int ex = -1, ey = -1;
  for (const auto* h : {&lp->eta_P, &lp->eta_Q})
    for (int i = 0; i < static_cast<int>(h->c.size()); ++i)
      if (!is_zero(h->c[i])) {
        ex = std::max(ex, i);
        ey = std::max(ey, h->degree - i);
      }
  auto xdeg = [](const HomPoly<S>& h) {
    int d = -1;
    for (int i = 0; i < static_cast<int>(h.c.size()); ++i)
      if (!is_zero(h.c[i])) d = i;
    return d;
  };
  auto ydeg = [](const HomPoly<S>& h) {
    int d = -1;
    for (int i = 0; i < static_cast<int>(h.c.size()); ++i)
      if (!is_zero(h.c[i])) d = std::max(d, h.degree - i);
    return d;
  };
  for (const auto& s : strata) {
    if (s.mu != mu || s.radial) continue;
    if (ex <= s.ex && ey <= s.ey && xdeg(lp->H1) <= k - s.ex && ydeg(lp->H2) <= k - s.ey) return true;
  }
  return false;
}

}  // namespace jetfol
