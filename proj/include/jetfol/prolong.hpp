#pragma once

// Deciding whether a jet of Phi admits a compatible pair of type (k, nu)
// through a given order.  Leading data are enumerated (over F_p) or sampled,
// then each degree is a linear system in the next homogeneous parts of the two
// forms; the search branches over its solutions modulo the gauge directions.

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetfol/certify.hpp"

namespace jetfol {

struct DecidePolicy {
  int max_free_params = 12;               ///< larger solution spaces are sampled
  std::uint64_t enumeration_budget = 1u << 20;  ///< exhaustive enumeration up to this many points
  int random_samples = 8;                 ///< draws per node / per stratum when sampling
  std::uint64_t node_budget = 200000;     ///< per leading candidate
  std::uint64_t seed = 0;
  int jobs = 1;
};

enum class Verdict { foliation_found, obstructed, inconclusive };
std::string to_string(Verdict v);

template <class S>
struct Certificate {
  Verdict verdict = Verdict::inconclusive;
  int k = 0, nu = 0, N = 0;
  /// obstructed: no pair of type (k, nu) has J^{order + 2nu} E = 0.
  int order = -1;
  /// true when the verdict holds for every pair (exhaustive search or a
  /// verified witness); false when leading data or branches were sampled.
  bool exact = false;
  std::string ring;
  std::uint64_t seed = 0;
  std::string reason;
  std::uint64_t leading_candidates = 0;
  std::uint64_t nodes = 0;
  std::optional<OneFormJet<S>> w1, w2;
};

/// One degree step: solutions of the degree-(2nu+t) equation in the
/// homogeneous parts of degree nu+t, modulo the gauge directions (y^t w1^nu, 0)
/// and (0, x^t w2^nu).
template <class S>
struct StepSolution {
  bool consistent = false;
  std::vector<S> particular;
  std::vector<std::vector<S>> free;   ///< complement of the gauge span in the kernel
  std::vector<std::vector<S>> gauge;
  std::vector<ParamSlot> slots;
};

namespace detail {

template <class S>
std::vector<S> hom_coeffs(const BiSeries<S>& f, int D) {
  std::vector<S> v;
  for (int i = 0; i <= D; ++i) v.push_back(f.coeff(i, D - i));
  return v;
}

template <class S>
std::vector<S> slot_vector(const std::vector<ParamSlot>& slots, const RawForm<S>& g1, const RawForm<S>& g2,
                           const ring_t<S>& ring) {
  std::vector<S> v(slots.size(), ring.zero());
  for (std::size_t c = 0; c < slots.size(); ++c) {
    const auto& s = slots[c];
    switch (s.kind) {
      case ParamSlot::Kind::w1_P: v[c] = g1.P.coeff(s.i, s.j); break;
      case ParamSlot::Kind::w1_Q: v[c] = g1.Q.coeff(s.i, s.j); break;
      case ParamSlot::Kind::w2_P: v[c] = g2.P.coeff(s.i, s.j); break;
      case ParamSlot::Kind::w2_Q: v[c] = g2.Q.coeff(s.i, s.j); break;
      default: break;
    }
  }
  return v;
}

/// Adds sum z_c * slot_c to (w1, w2), both padded to order `order`.
template <class S>
void apply_slots(RawForm<S>& w1, RawForm<S>& w2, const std::vector<ParamSlot>& slots, const std::vector<S>& z,
                 int order) {
  const auto& ring = w1.ring();
  w1 = padded_to(w1, order);
  w2 = padded_to(w2, order);
  for (std::size_t c = 0; c < slots.size(); ++c) {
    if (is_zero(z[c])) continue;
    auto term = BiSeries<S>::monomial(ring, order, slots[c].i, slots[c].j, z[c]);
    switch (slots[c].kind) {
      case ParamSlot::Kind::w1_P: w1.P = w1.P + term; break;
      case ParamSlot::Kind::w1_Q: w1.Q = w1.Q + term; break;
      case ParamSlot::Kind::w2_P: w2.P = w2.P + term; break;
      case ParamSlot::Kind::w2_Q: w2.Q = w2.Q + term; break;
      default: break;
    }
  }
}

}  // namespace detail

/// Coefficient matrix of the step at level t: columns delta ^ w2^nu and
/// w1^nu ^ delta over the chart-bounded monomials of degree nu + t.
template <class S>
Matrix<S> step_matrix(const RawForm<S>& lead1, const RawForm<S>& lead2, int k, int nu, int t,
                      std::vector<ParamSlot>& slots) {
  const auto& ring = lead1.ring();
  const int D = 2 * nu + t, m = nu + t;
  slots = form_slots(1, k, m);
  for (const auto& s : form_slots(2, k, m)) slots.push_back(s);
  const auto L1 = padded_to(homogeneous_part(lead1, nu), D), L2 = padded_to(homogeneous_part(lead2, nu), D);
  Matrix<S> A(ring, D + 1, slots.size());
  for (std::size_t c = 0; c < slots.size(); ++c) {
    auto d = unit_direction<S>(slots[c], ring, D);
    auto f = d.slot == 1 ? wedge(*d.form, L2).f : wedge(L1, *d.form).f;
    A.set_column(c, detail::hom_coeffs(f, D));
  }
  return A;
}

/// Solves level t given (w1, w2) known through degree nu + t - 1 and Phi
/// through degree t + 1.
template <class S>
StepSolution<S> extend_one_degree(const DiffeoJet<S>& phi, const RawForm<S>& w1, const RawForm<S>& w2, int k,
                                  int nu, int t, const Matrix<S>* cached = nullptr,
                                  const std::vector<ParamSlot>* cached_slots = nullptr) {
  if (t < 1) throw DomainError("extend_one_degree: level must be >= 1");
  if (phi.order() < t + 1)
    throw DomainError("extend_one_degree: Phi known to order " + std::to_string(phi.order()) + ", need " +
                      std::to_string(t + 1));
  const auto& ring = phi.ring();
  const int D = 2 * nu + t, m = nu + t;
  StepSolution<S> out;
  std::optional<Matrix<S>> own;
  if (cached) {
    out.slots = *cached_slots;
  } else {
    own.emplace(step_matrix(w1, w2, k, nu, t, out.slots));
    cached = &*own;
  }
  auto r = residual_raw(jet(phi, t + 1), padded_to(jet(w1, m - 1), m), padded_to(jet(w2, m - 1), m));
  if (r.valid_order < D) throw DomainError("extend_one_degree: residual undetermined at degree " + std::to_string(D));
  auto b = detail::hom_coeffs(r.f.f, D);
  for (auto& v : b) v = -v;
  auto sol = solve_affine(*cached, b);
  if (!sol.consistent) return out;
  out.consistent = true;
  out.particular = std::move(sol.particular);
  // gauge: (y^t w1^nu, 0) and (0, x^t w2^nu)
  const auto L1 = homogeneous_part(w1, nu), L2 = homogeneous_part(w2, nu);
  auto yt = BiSeries<S>::monomial(ring, m, 0, t, ring.one());
  auto xt = BiSeries<S>::monomial(ring, m, t, 0, ring.one());
  auto zero = RawForm<S>::zero(ring, m);
  for (const auto& g : {detail::slot_vector(out.slots, multiply(yt, padded_to(L1, m)), zero, ring),
                        detail::slot_vector(out.slots, zero, multiply(xt, padded_to(L2, m)), ring)}) {
    bool nz = false;
    for (const auto& v : g) nz = nz || !is_zero(v);
    if (nz) out.gauge.push_back(g);
  }
  out.free = complement_basis(sol.kernel, out.gauge, ring);
  return out;
}

/// Leading pairs to try: all normalized wedge-zero pairs over F_p when within
/// budget (exact), otherwise stratum samples.
template <class S>
std::vector<std::pair<RawForm<S>, RawForm<S>>> leading_candidates(const ring_t<S>& ring, int k, int nu,
                                                                  const DecidePolicy& policy, bool& exhaustive);

/// Exhaustive (over F_p) or sampled search; see Certificate for the meaning of
/// the verdicts.  Needs J^{N+1} Phi.
template <class S>
Certificate<S> decide_type(const DiffeoJet<S>& phi, int k, int nu, int N, const DecidePolicy& policy = {});

/// Brute force over F_p: is there a pair of type (k, nu) with J^{N+2nu} E = 0?
/// Enumerates all J^{N+nu} jets; guarded at p^(d1+d2) <= 1e8.
struct OracleResult {
  bool exists = false;
  std::uint64_t enumerated = 0;
  std::optional<OneFormJet<Fp>> w1, w2;
};
OracleResult brute_force_oracle(const DiffeoJet<Fp>& phi, int k, int nu, int N);

json to_json(const Certificate<Rational>& c);
json to_json(const Certificate<Fp>& c);

extern template Certificate<Rational> decide_type(const DiffeoJet<Rational>&, int, int, int, const DecidePolicy&);
extern template Certificate<Fp> decide_type(const DiffeoJet<Fp>&, int, int, int, const DecidePolicy&);

}  // namespace jetfol
