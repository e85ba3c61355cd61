#pragma once

// Jets of diffeomorphism germs (phi, psi) of (C^2, 0) tangent to the identity:
// the gluing data of the two charts.

#include <string>

#include "jetfol/rng.hpp"
#include "jetfol/series.hpp"

namespace jetfol {

template <class S>
class DiffeoJet {
 public:
  using Ring = ring_t<S>;

  /// Checks order >= 1, equal component orders and J^1 = (x, y).
  DiffeoJet(BiSeries<S> phi, BiSeries<S> psi) : phi_(std::move(phi)), psi_(std::move(psi)) {
    if (phi_.order() != psi_.order()) throw DomainError("diffeomorphism components of different orders");
    if (phi_.order() < 1) throw DomainError("diffeomorphism jet must have order >= 1");
    if (!(phi_.ring() == psi_.ring())) throw RingMismatch("diffeomorphism components over different rings");
    const auto& r = phi_.ring();
    auto one = r.one(), zero = r.zero();
    if (!(phi_.coeff(0, 0) == zero && phi_.coeff(1, 0) == one && phi_.coeff(0, 1) == zero &&
          psi_.coeff(0, 0) == zero && psi_.coeff(1, 0) == zero && psi_.coeff(0, 1) == one))
      throw DomainError("diffeomorphism jet is not tangent to the identity");
  }

  static DiffeoJet identity(Ring ring, int order) {
    if (order < 1) throw DomainError("identity jet needs order >= 1");
    return DiffeoJet(BiSeries<S>::x(ring, order), BiSeries<S>::y(ring, order));
  }

  /// id + (a, b); a, b must only contain terms of degree >= 2.
  static DiffeoJet from_perturbation(const BiSeries<S>& a, const BiSeries<S>& b) {
    for (const auto* f : {&a, &b})
      for (const auto& t : f->terms())
        if (t.degree() < 2) throw DomainError("perturbation term of degree < 2");
    const int n = std::min(a.order(), b.order());
    auto id = identity(a.ring(), n);
    return DiffeoJet(id.phi() + a, id.psi() + b);
  }

  const BiSeries<S>& phi() const { return phi_; }
  const BiSeries<S>& psi() const { return psi_; }
  int order() const { return phi_.order(); }
  const Ring& ring() const { return phi_.ring(); }

  /// (phi - x, psi - y): the coefficients a_ij, b_ij with i+j >= 2.
  BiSeries<S> phi_perturbation() const { return phi_ - BiSeries<S>::x(ring(), order()); }
  BiSeries<S> psi_perturbation() const { return psi_ - BiSeries<S>::y(ring(), order()); }

  friend bool operator==(const DiffeoJet&, const DiffeoJet&) = default;

 private:
  BiSeries<S> phi_;
  BiSeries<S> psi_;
};

template <class S>
DiffeoJet<S> identity_jet(ring_t<S> ring, int order) {
  return DiffeoJet<S>::identity(std::move(ring), order);
}

template <class S>
DiffeoJet<S> jet(const DiffeoJet<S>& f, int n) {
  return DiffeoJet<S>(jet(f.phi(), n), jet(f.psi(), n));
}

/// Raises the declared order; see BiSeries::padded_to.
template <class S>
DiffeoJet<S> padded_to(const DiffeoJet<S>& f, int n) {
  return DiffeoJet<S>(f.phi().padded_to(n), f.psi().padded_to(n));
}

/// F o G.
template <class S>
DiffeoJet<S> compose(const DiffeoJet<S>& f, const DiffeoJet<S>& g) {
  if (f.order() != g.order()) throw DomainError("composition of jets of different orders");
  return DiffeoJet<S>(compose(f.phi(), g.phi(), g.psi()), compose(f.psi(), g.phi(), g.psi()));
}

/// Two-sided inverse at jet level, built degree by degree: if F o G = id mod
/// degree d, subtracting the degree-d defect from G fixes degree d.
template <class S>
DiffeoJet<S> invert(const DiffeoJet<S>& f) {
  const int n = f.order();
  auto g = DiffeoJet<S>::identity(f.ring(), n);
  for (int d = 2; d <= n; ++d) {
    auto c = compose(f, g);
    auto dphi = homogeneous_part(c.phi_perturbation(), d);
    auto dpsi = homogeneous_part(c.psi_perturbation(), d);
    if (dphi.is_zero() && dpsi.is_zero()) continue;
    g = DiffeoJet<S>(g.phi() - dphi, g.psi() - dpsi);
  }
  return g;
}

/// max |a_ij|, |b_ij| over the perturbation coefficients (i+j >= 2).
template <class S>
Rational sup_norm(const DiffeoJet<S>& f) {
  Rational m = 0;
  for (const auto& comp : {f.phi_perturbation(), f.psi_perturbation()})
    for (const auto& t : comp.terms()) {
      Rational a = abs_value(t.c);
      if (a > m) m = a;
    }
  return m;
}

/// max |coefficient difference| between two jets over both components.
template <class S>
Rational sup_distance(const DiffeoJet<S>& f, const DiffeoJet<S>& g) {
  Rational m = 0;
  const int n = std::min(f.order(), g.order());
  for (const auto& comp : {jet(f.phi(), n) - jet(g.phi(), n), jet(f.psi(), n) - jet(g.psi(), n)})
    for (const auto& t : comp.terms()) {
      Rational a = abs_value(t.c);
      if (a > m) m = a;
    }
  return m;
}

namespace detail {

inline Rational sample_band_coeff(Rng& rng, const RationalRing&, const Rational& bound) {
  return grid_rational(rng, bound);
}

/// Over F_p there is no size constraint; coefficients are uniform.
inline Fp sample_band_coeff(Rng& rng, const PrimeField& field, const Rational&) { return rng.element(field.p); }

}  // namespace detail

/// Adds independent random coefficients on the monomials lo < i+j <= hi of
/// both components.  Over Q each has |c| < bound on the grid c/2^16; over F_p
/// coefficients are uniform (bound only acts as an on/off switch).
/// Deterministic given the seed: phi then psi, monomials in (degree, i) order.
template <class S>
DiffeoJet<S> perturb_band(const DiffeoJet<S>& f, const DegreeBand& b, const Rational& bound, std::uint64_t seed) {
  if (b.hi > f.order())
    throw DomainError("perturbation band up to " + std::to_string(b.hi) + " exceeds jet order " +
                      std::to_string(f.order()));
  if (sgn(bound) <= 0) return f;
  Rng rng(seed);
  auto draw = [&]() {
    std::vector<typename BiSeries<S>::Term> terms;
    for (int d = std::max(b.lo + 1, 2); d <= b.hi; ++d)
      for (int i = 0; i <= d; ++i) terms.push_back({i, d - i, detail::sample_band_coeff(rng, f.ring(), bound)});
    return BiSeries<S>::from_terms(f.ring(), f.order(), std::move(terms));
  };
  auto dphi = draw();
  auto dpsi = draw();
  return DiffeoJet<S>(f.phi() + dphi, f.psi() + dpsi);
}

inline DiffeoJet<Fp> reduce_mod(const DiffeoJet<Rational>& f, const PrimeField& field) {
  return DiffeoJet<Fp>(reduce_mod(f.phi(), field), reduce_mod(f.psi(), field));
}

}  // namespace jetfol
