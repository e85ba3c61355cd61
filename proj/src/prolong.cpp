#include "jetfol/prolong.hpp"

#include <type_traits>

namespace jetfol {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::foliation_found: return "foliation_found";
    case Verdict::obstructed: return "obstructed";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

std::uint64_t checked_pow(std::uint64_t p, std::size_t e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > cap / p) return cap + 1;
    r *= p;
  }
  return r;
}

template <class S>
RawForm<S> form_from_slots(const std::vector<ParamSlot>& slots, const std::vector<S>& v, const ring_t<S>& ring,
                           int order, int which) {
  RawForm<S> w = RawForm<S>::zero(ring, order), other = RawForm<S>::zero(ring, order);
  std::vector<ParamSlot> moved = slots;
  // slot kinds name the form; map onto w regardless of which slot set was used
  for (auto& s : moved) {
    if (which == 1 && (s.kind == ParamSlot::Kind::w2_P)) s.kind = ParamSlot::Kind::w1_P;
    if (which == 1 && (s.kind == ParamSlot::Kind::w2_Q)) s.kind = ParamSlot::Kind::w1_Q;
  }
  if (which == 1)
    detail::apply_slots(w, other, moved, v, order);
  else
    detail::apply_slots(other, w, moved, v, order);
  return w;
}

/// Vectors of F_p^d with first nonzero coordinate 1.
std::vector<std::vector<Fp>> projective_points(std::uint32_t p, std::size_t d) {
  std::vector<std::vector<Fp>> out;
  const std::uint64_t total = checked_pow(p, d, UINT64_MAX / 2);
  for (std::uint64_t code = 1; code < total; ++code) {
    std::vector<Fp> v;
    std::uint64_t c = code;
    for (std::size_t i = 0; i < d; ++i) {
      v.emplace_back(p, c % p);
      c /= p;
    }
    std::size_t f = 0;
    while (is_zero(v[f])) ++f;
    if (v[f].value() == 1) out.push_back(std::move(v));
  }
  return out;
}

template <class S>
S draw_nonzero(Rng& rng, const ring_t<S>& ring) {
  while (true) {
    S v = draw_scalar(rng, ring);
    if (!is_zero(v)) return v;
  }
}

template <class S>
std::vector<std::pair<RawForm<S>, RawForm<S>>> sampled_candidates(const ring_t<S>& ring, int k, int nu,
                                                                  const DecidePolicy& policy) {
  std::vector<std::pair<RawForm<S>, RawForm<S>>> out;
  Rng rng(derive_seed(policy.seed, {0x1ead}));
  for (const auto& s : enumerate_leading_strata(k, nu)) {
    const int pc = s.param_count();
    auto draw = [&] { return draw_nonzero<S>(rng, ring); };
    for (int t = 0; t < policy.random_samples; ++t) out.push_back(sample_stratum<S>(s, ring, nu, draw));
    // sparse supports catch special leading data such as eta = dx
    if (pc <= 6)
      for (std::uint32_t bits = 1; bits + 1 < (1u << pc); ++bits) {
        std::vector<bool> mask(static_cast<std::size_t>(pc));
        for (int c = 0; c < pc; ++c) mask[static_cast<std::size_t>(c)] = (bits >> c) & 1u;
        try {
          out.push_back(sample_stratum<S>(s, ring, nu, draw, mask));
        } catch (const DomainError&) {
        }
      }
  }
  return out;
}

}  // namespace

template <class S>
std::vector<std::pair<RawForm<S>, RawForm<S>>> leading_candidates(const ring_t<S>& ring, int k, int nu,
                                                                  const DecidePolicy& policy, bool& exhaustive) {
  if constexpr (std::is_same_v<S, Fp>) {
    const auto s1 = form_slots(1, k, nu), s2 = form_slots(2, k, nu);
    const std::uint64_t p = ring.p;
    const std::uint64_t n1 = (checked_pow(p, s1.size(), policy.enumeration_budget * p) - 1) / (p - 1);
    const std::uint64_t n2 = (checked_pow(p, s2.size(), policy.enumeration_budget * p) - 1) / (p - 1);
    if (n1 <= policy.enumeration_budget && n2 <= policy.enumeration_budget && n1 * n2 <= policy.enumeration_budget) {
      exhaustive = true;
      std::vector<std::pair<RawForm<S>, RawForm<S>>> out;
      const auto v1s = projective_points(ring.p, s1.size()), v2s = projective_points(ring.p, s2.size());
      std::vector<RawForm<S>> f2;
      for (const auto& v : v2s) f2.push_back(form_from_slots(s2, v, ring, nu, 2));
      for (const auto& v : v1s) {
        auto a = form_from_slots(s1, v, ring, nu, 1);
        for (const auto& b : f2)
          if (wedge(padded_to(a, 2 * nu), padded_to(b, 2 * nu)).f.is_zero()) out.emplace_back(a, b);
      }
      return out;
    }
  }
  exhaustive = false;
  return sampled_candidates<S>(ring, k, nu, policy);
}

namespace {

template <class S>
struct Search {
  const DiffeoJet<S>& phi;
  int k, nu, N;
  const DecidePolicy& policy;
  Rng rng;
  const std::atomic<std::size_t>& best_found;
  std::size_t index;

  std::uint64_t nodes = 0;
  bool exhaustive = true;
  bool budget_hit = false;
  bool cancelled = false;
  int max_fail = 0;
  std::vector<std::optional<std::pair<Matrix<S>, std::vector<ParamSlot>>>> cache;
  std::optional<std::pair<RawForm<S>, RawForm<S>>> found;

  bool run(const RawForm<S>& w1, const RawForm<S>& w2, int t) {
    if (t > N) {
      found.emplace(w1, w2);
      return true;
    }
    if (best_found.load() < index) {
      cancelled = true;
      return false;
    }
    if (++nodes > policy.node_budget) {
      budget_hit = true;
      return false;
    }
    auto& slot = cache[static_cast<std::size_t>(t)];
    if (!slot) {
      std::vector<ParamSlot> slots;
      auto A = step_matrix(w1, w2, k, nu, t, slots);
      slot.emplace(std::move(A), std::move(slots));
    }
    auto step = extend_one_degree(phi, w1, w2, k, nu, t, &slot->first, &slot->second);
    if (!step.consistent) {
      max_fail = std::max(max_fail, t);
      return false;
    }
    const auto& ring = phi.ring();
    const std::size_t r = step.free.size();
    auto try_point = [&](const std::vector<S>& coeffs) {
      auto z = step.particular;
      for (std::size_t j = 0; j < r; ++j)
        if (!is_zero(coeffs[j]))
          for (std::size_t c = 0; c < z.size(); ++c) z[c] += coeffs[j] * step.free[j][c];
      RawForm<S> a = w1, b = w2;
      detail::apply_slots(a, b, step.slots, z, nu + t);
      return run(a, b, t + 1);
    };
    bool enumerate = false;
    std::uint64_t total = 1;
    if constexpr (std::is_same_v<S, Fp>) {
      total = checked_pow(ring.p, r, policy.enumeration_budget);
      enumerate = static_cast<int>(r) <= policy.max_free_params && total <= policy.enumeration_budget;
    } else {
      enumerate = r == 0;
    }
    if (enumerate) {
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<S> coeffs;
        if constexpr (std::is_same_v<S, Fp>) {
          std::uint64_t c = code;
          for (std::size_t j = 0; j < r; ++j) {
            coeffs.emplace_back(ring.p, c % ring.p);
            c /= ring.p;
          }
        }
        if (try_point(coeffs)) return true;
        if (budget_hit || cancelled) return false;
      }
      return false;
    }
    exhaustive = false;
    for (int s = 0; s < policy.random_samples; ++s) {
      std::vector<S> coeffs;
      for (std::size_t j = 0; j < r; ++j) coeffs.push_back(draw_scalar(rng, ring));
      if (try_point(coeffs)) return true;
      if (budget_hit || cancelled) return false;
    }
    return false;
  }
};

}  // namespace

template <class S>
Certificate<S> decide_type(const DiffeoJet<S>& phi, int k, int nu, int N, const DecidePolicy& policy) {
  if (k < 0 || nu < 0) throw DomainError("decide: type must be non-negative");
  if (N < 0) throw DomainError("decide: working order must be >= 0");
  if (phi.order() < N + 1)
    throw DomainError("decide: Phi known to order " + std::to_string(phi.order()) + ", need " +
                      std::to_string(N + 1));
  const auto& ring = phi.ring();
  Certificate<S> cert;
  cert.k = k;
  cert.nu = nu;
  cert.N = N;
  cert.ring = ring.name();
  cert.seed = policy.seed;
  bool lead_exhaustive = false;
  auto cands = leading_candidates<S>(ring, k, nu, policy, lead_exhaustive);
  cert.leading_candidates = cands.size();

  std::atomic<std::size_t> best{SIZE_MAX};
  std::vector<std::optional<Search<S>>> searches(cands.size());
  parallel_for(cands.size(), policy.jobs, [&](std::size_t i) {
    auto& s = searches[i].emplace(
        Search<S>{phi, k, nu, N, policy, Rng(derive_seed(policy.seed, {0xdec1de, i})), best, i,
                  0, true, false, false, 0, {}, std::nullopt});
    s.cache.resize(static_cast<std::size_t>(N) + 2);
    if (s.run(cands[i].first, cands[i].second, 1)) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  });

  bool exhaustive = lead_exhaustive, budget = false;
  for (std::size_t i = 0; i < searches.size(); ++i) {
    auto& s = *searches[i];
    cert.nodes += s.nodes;
    if (s.found && i == best.load()) {
      cert.verdict = Verdict::foliation_found;
      cert.order = N;
      cert.w1.emplace(1, s.found->first, k, nu);
      cert.w2.emplace(2, s.found->second, k, nu);
      if (!truncated_E(phi, *cert.w1, *cert.w2, N).vanishes())
        throw Error("decide: witness failed re-verification");
      cert.exact = true;
      cert.reason = "witness verified: J^" + std::to_string(N + 2 * nu) + " E = 0";
      return cert;
    }
    exhaustive = exhaustive && s.exhaustive;
    budget = budget || s.budget_hit;
    cert.order = std::max(cert.order, s.max_fail);
  }
  if (budget) {
    cert.verdict = Verdict::inconclusive;
    cert.order = -1;
    cert.reason = "node budget exceeded";
    return cert;
  }
  cert.verdict = Verdict::obstructed;
  if (cands.empty()) cert.order = 0;
  cert.exact = exhaustive;
  cert.reason = exhaustive ? "exhaustive search over " + ring.name()
                           : std::string("sampled leading data or branches; no pair found");
  return cert;
}

template Certificate<Rational> decide_type(const DiffeoJet<Rational>&, int, int, int, const DecidePolicy&);
template Certificate<Fp> decide_type(const DiffeoJet<Fp>&, int, int, int, const DecidePolicy&);

OracleResult brute_force_oracle(const DiffeoJet<Fp>& phi, int k, int nu, int N) {
  if (N < 0 || k < 0 || nu < 0) throw DomainError("oracle: bad arguments");
  if (phi.order() < N + 1) throw DomainError("oracle: Phi known to order " + std::to_string(phi.order()));
  const auto& ring = phi.ring();
  const std::uint32_t p = ring.p;
  const int O = N + nu, M = N + 2 * nu;
  std::vector<ParamSlot> s1, s2;
  for (int d = nu; d <= O; ++d) {
    for (const auto& s : form_slots(1, k, d)) s1.push_back(s);
    for (const auto& s : form_slots(2, k, d)) s2.push_back(s);
  }
  const std::size_t d1 = s1.size(), d2 = s2.size();
  if (checked_pow(p, d1 + d2, 100000000ULL) > 100000000ULL)
    throw GuardError("oracle: p^" + std::to_string(d1 + d2) + " exceeds 1e8 jets");
  const auto ph = phi.order() >= M + 1 ? jet(phi, M + 1) : padded_to(phi, M + 1);
  auto basis = [&](const ParamSlot& s) {
    auto d = unit_direction<Fp>(s, ring, M);
    return *d.form;
  };
  std::vector<RawForm<Fp>> pulled, e2;
  for (const auto& s : s1) pulled.push_back(pullback(ph, basis(s)));
  for (const auto& s : s2) e2.push_back(basis(s));
  const std::size_t R = mono_count(M);
  // T[a][b] = J^M E(phi, e_a, e_b)
  std::vector<std::vector<std::vector<std::uint64_t>>> T(d1, std::vector<std::vector<std::uint64_t>>(d2));
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b) {
      auto f = jet(wedge(pulled[a], e2[b]).f, M).dense(M);
      for (const auto& v : f) T[a][b].push_back(v.value());
    }
  std::vector<bool> lead1(d1), lead2(d2);
  for (std::size_t a = 0; a < d1; ++a) lead1[a] = s1[a].degree() == nu;
  for (std::size_t b = 0; b < d2; ++b) lead2[b] = s2[b].degree() == nu;

  OracleResult res;
  const std::uint64_t total2 = checked_pow(p, d2, UINT64_MAX / 2);
  for (const auto& v1 : projective_points(p, d1)) {
    bool has_lead = false;
    for (std::size_t a = 0; a < d1; ++a) has_lead = has_lead || (lead1[a] && !is_zero(v1[a]));
    if (!has_lead) continue;
    // Mat[b][r] = sum_a v1[a] T[a][b][r]
    std::vector<std::vector<std::uint64_t>> mat(d2, std::vector<std::uint64_t>(R, 0));
    for (std::size_t a = 0; a < d1; ++a) {
      const std::uint64_t c = v1[a].value();
      if (c == 0) continue;
      for (std::size_t b = 0; b < d2; ++b)
        for (std::size_t r = 0; r < R; ++r) mat[b][r] = (mat[b][r] + c * T[a][b][r]) % p;
    }
    std::vector<std::uint64_t> y(R, 0);
    std::vector<int> g(d2, 0), dir(d2, 1);
    std::size_t nz = 0, lead_nz = 0;
    for (std::uint64_t step = 1; step < total2; ++step) {
      std::size_t i = 0;
      while (true) {
        const int nv = g[i] + dir[i];
        if (nv >= 0 && nv < static_cast<int>(p)) break;
        dir[i] = -dir[i];
        ++i;
      }
      const int old = g[i];
      g[i] += dir[i];
      if (lead2[i]) lead_nz += (g[i] != 0) - (old != 0);
      for (std::size_t r = 0; r < R; ++r) {
        const std::uint64_t before = y[r];
        y[r] = dir[i] > 0 ? (y[r] + mat[i][r]) % p : (y[r] + p - mat[i][r]) % p;
        nz += (y[r] != 0) - (before != 0);
      }
      ++res.enumerated;
      if (nz == 0 && lead_nz > 0) {
        std::vector<Fp> v2;
        for (auto c : g) v2.emplace_back(p, static_cast<std::uint64_t>(c));
        res.exists = true;
        res.w1.emplace(1, form_from_slots(s1, v1, ring, O, 1), k, nu);
        res.w2.emplace(2, form_from_slots(s2, v2, ring, O, 2), k, nu);
        return res;
      }
    }
  }
  return res;
}

namespace {

template <class S>
json certificate_json(const Certificate<S>& c) {
  json j{{"kind", "decide"}, {"verdict", to_string(c.verdict)}, {"k", c.k}, {"nu", c.nu}, {"N", c.N},
         {"order", c.order >= 0 ? json(c.order) : json(nullptr)}, {"exact", c.exact}, {"ring", c.ring},
         {"seed", c.seed}, {"reason", c.reason}, {"leading_candidates", c.leading_candidates},
         {"nodes", c.nodes}};
  if (c.w1) {
    j["w1"] = to_json(*c.w1);
    j["w2"] = to_json(*c.w2);
  }
  return j;
}

}  // namespace

json to_json(const Certificate<Rational>& c) { return certificate_json(c); }
json to_json(const Certificate<Fp>& c) { return certificate_json(c); }

}  // namespace jetfol
