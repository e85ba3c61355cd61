#pragma once

// The compatibility operator E(Phi, w1, w2) = Phi^* w1 ^ w2 = f dx^dy, with
// the accuracy bookkeeping of its truncations and its first-order variations.

#include <algorithm>
#include <string>

#include "jetfol/forms.hpp"

namespace jetfol {

/// f together with the largest M such that J^M f is determined by the inputs.
template <class S>
struct Residual {
  TwoFormJet<S> f;
  int valid_order = 0;

  bool vanishes() const { return f.f.is_zero(); }
};

/// Value and derivative along one tangent direction.
template <class S>
struct Directional {
  Residual<S> value;
  Residual<S> derivative;
};

/// Degree through which Phi^* w1 ^ w2 is determined when Phi is known to order
/// n, w_i to order n_i and w_i vanishes to order at least nu_i.  An unknown
/// Phi^m (m > n) first enters in degree m + nu_1 + nu_2 - 1, an unknown w_1^m in
/// degree m + nu_2 and an unknown w_2^m in degree m + nu_1.
inline int valid_order_for(int n, int n1, int nu1, int n2, int nu2) {
  return std::min({n + nu1 + nu2 - 1, n1 + nu2, n2 + nu1});
}

/// E on raw forms.  The inputs are padded to the valid order before the
/// products are formed; by the bound above the padding cannot reach J^M f.
template <class S>
Residual<S> residual_raw(const DiffeoJet<S>& phi, const RawForm<S>& w1, const RawForm<S>& w2) {
  if (!(phi.ring() == w1.ring()) || !(phi.ring() == w2.ring()))
    throw RingMismatch("E: inputs over different rings");
  const int nu1 = std::min(valuation_bound(w1), w1.order() + 1);
  const int nu2 = std::min(valuation_bound(w2), w2.order() + 1);
  const int M = valid_order_for(phi.order(), w1.order(), nu1, w2.order(), nu2);
  if (M < 0) throw DomainError("E: input orders determine no coefficient of f");
  auto lift = [](const RawForm<S>& w, int m) { return w.order() >= m ? jet(w, m) : padded_to(w, m); };
  const DiffeoJet<S> ph = phi.order() >= M + 1 ? jet(phi, M + 1) : padded_to(phi, M + 1);
  auto pulled = pullback(ph, lift(w1, M));
  Residual<S> r{wedge(pulled, lift(w2, M)), M};
  r.f.f = jet(r.f.f, M);
  return r;
}

namespace detail {

template <class S>
void check_pair(const OneFormJet<S>& w1, const OneFormJet<S>& w2) {
  if (w1.chart() != 1) throw DomainError("E: first form must live in chart 1");
  if (w2.chart() != 2) throw DomainError("E: second form must live in chart 2");
  if (w1.nu() != w2.nu())
    throw DomainError("E: vanishing orders differ (" + std::to_string(w1.nu()) + " vs " + std::to_string(w2.nu()) +
                      ")");
}

}  // namespace detail

template <class S>
Residual<S> evaluate_E(const DiffeoJet<S>& phi, const OneFormJet<S>& w1, const OneFormJet<S>& w2) {
  detail::check_pair(w1, w2);
  return residual_raw(phi, w1.form(), w2.form());
}

/// J^{N+2nu} E computed from J^{N+1} Phi and J^{N+nu} w_i only.
template <class S>
Residual<S> truncated_E(const DiffeoJet<S>& phi, const OneFormJet<S>& w1, const OneFormJet<S>& w2, int N) {
  detail::check_pair(w1, w2);
  const int nu = w1.nu();
  if (N < 0) throw DomainError("truncated_E: N must be >= 0");
  if (phi.order() < N + 1)
    throw DomainError("truncated_E: Phi known to order " + std::to_string(phi.order()) + ", need " +
                      std::to_string(N + 1));
  if (w1.order() < N + nu || w2.order() < N + nu)
    throw DomainError("truncated_E: forms known to order " + std::to_string(std::min(w1.order(), w2.order())) +
                      ", need " + std::to_string(N + nu));
  auto r = residual_raw(jet(phi, N + 1), jet(w1.form(), N + nu), jet(w2.form(), N + nu));
  // nu is exact for both forms, so the bound is attained
  return r;
}

template <class S>
RawForm<Dual<S>> lift_dual(const RawForm<S>& w) {
  return {lift_dual(w.P), lift_dual(w.Q)};
}

template <class S>
RawForm<S> real_part(const RawForm<Dual<S>>& w) {
  return {real_part(w.P), real_part(w.Q)};
}

template <class S>
Residual<S> real_part(const Residual<Dual<S>>& r) {
  return {{real_part(r.f.f)}, r.valid_order};
}

template <class S>
Residual<S> dual_part(const Residual<Dual<S>>& r) {
  return {{dual_part(r.f.f)}, r.valid_order};
}

/// Phi + t (a, b) over the dual numbers.
template <class S>
DiffeoJet<Dual<S>> dual_diffeo(const DiffeoJet<S>& phi, const BiSeries<S>& a, const BiSeries<S>& b) {
  return DiffeoJet<Dual<S>>(make_dual(phi.phi(), a), make_dual(phi.psi(), b));
}

/// Derivative of E at (Phi, w1, w2) along Phi + t X, exact over dual numbers.
template <class S>
Directional<S> dE_phi(const DiffeoJet<S>& phi, const OneFormJet<S>& w1, const OneFormJet<S>& w2,
                      const HomVectorField<S>& X) {
  detail::check_pair(w1, w2);
  if (X.degree() > phi.order())
    throw DomainError("dE_phi: direction of degree " + std::to_string(X.degree()) + " above the order of Phi");
  auto a = X.a().order() >= phi.order() ? jet(X.a(), phi.order()) : X.a().padded_to(phi.order());
  auto b = X.b().order() >= phi.order() ? jet(X.b(), phi.order()) : X.b().padded_to(phi.order());
  auto r = residual_raw(dual_diffeo(phi, a, b), lift_dual(w1.form()), lift_dual(w2.form()));
  return {real_part(r), dual_part(r)};
}

/// Derivative of E in slot `which` along delta; E is linear in each slot, so this
/// is E with the slot replaced.
template <class S>
Residual<S> dE_omega(const DiffeoJet<S>& phi, const OneFormJet<S>& w1, const OneFormJet<S>& w2, int which,
                     const RawForm<S>& delta) {
  detail::check_pair(w1, w2);
  if (which == 1) return residual_raw(phi, delta, w2.form());
  if (which == 2) return residual_raw(phi, w1.form(), delta);
  throw DomainError("dE_omega: slot must be 1 or 2");
}

}  // namespace jetfol
