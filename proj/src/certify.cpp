#include "jetfol/certify.hpp"

#include <algorithm>

namespace jetfol {

long long dim_fol_jets(int k, int nu, int M) {
  if (k < 0 || nu < 0) throw DomainError("dim_fol_jets: type must be non-negative");
  long long d = 0;
  for (int n = nu; n <= M; ++n) d += 4LL * (std::min(n, k) + 1);
  return d;
}

std::string ParamSlot::label() const {
  static const char* names[] = {"phi", "psi", "w1.P", "w1.Q", "w2.P", "w2.Q"};
  return std::string(names[static_cast<int>(kind)]) + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

std::vector<ParamSlot> phi_slots(int degree) {
  std::vector<ParamSlot> out;
  for (auto kind : {ParamSlot::Kind::phi_a, ParamSlot::Kind::phi_b})
    for (int i = 0; i <= degree; ++i) out.push_back({kind, i, degree - i});
  return out;
}

std::vector<ParamSlot> form_slots(int which, int k, int degree) {
  if (which != 1 && which != 2) throw DomainError("form slot must be 1 or 2");
  const auto P = which == 1 ? ParamSlot::Kind::w1_P : ParamSlot::Kind::w2_P;
  const auto Q = which == 1 ? ParamSlot::Kind::w1_Q : ParamSlot::Kind::w2_Q;
  std::vector<ParamSlot> out;
  for (auto kind : {P, Q})
    for (int i = 0; i <= degree; ++i) {
      const int bounded = which == 1 ? i : degree - i;
      if (bounded <= k) out.push_back({kind, i, degree - i});
    }
  return out;
}

RankReport certified_rank(const Matrix<Rational>& A, const RankPolicy& policy) {
  RankReport r;
  r.rows = A.rows();
  r.cols = A.cols();
  const std::size_t full = std::min(r.rows, r.cols);
  bool use_exact = policy.method == RankPolicy::Method::exact ||
                   (policy.method == RankPolicy::Method::automatic && r.rows * r.cols <= policy.exact_cell_limit);
  std::optional<std::size_t> first;
  for (auto p : policy.primes) {
    auto m = modular_rank(A, p);
    r.modular.emplace_back(p, m);
    if (m) {
      if (first && *first != *m) r.consensus = false;
      if (!first) first = m;
      r.rank = std::max(r.rank, *m);
    }
  }
  if (use_exact) {
    r.rank = bareiss_rank(A);
    r.exact = true;
    r.method = "bareiss";
  } else {
    // a modular rank is a lower bound; it is exact once it reaches the maximum
    r.exact = r.rank == full;
    r.method = "modular";
  }
  return r;
}

RankReport certified_rank(const Matrix<Fp>& A, const RankPolicy&) {
  RankReport r;
  r.rows = A.rows();
  r.cols = A.cols();
  r.rank = rank_field(A);
  r.exact = true;
  r.method = "gauss-" + A.ring().name();
  return r;
}

json to_json(const RankReport& r) {
  json mods = json::array();
  for (const auto& [p, m] : r.modular) mods.push_back(json{{"p", p}, {"rank", m ? json(*m) : json(nullptr)}});
  return json{{"rank", r.rank}, {"rows", r.rows}, {"cols", r.cols}, {"exact", r.exact},
              {"method", r.method}, {"modular", mods}, {"consensus", r.consensus}};
}

std::vector<LeadingStratum> eligible_strata(int k, int nu, StratumChoice choice) {
  std::vector<LeadingStratum> out;
  for (auto& s : enumerate_leading_strata(k, nu)) {
    if (choice == StratumChoice::radial && !s.radial) continue;
    if (choice == StratumChoice::non_radial && s.radial) continue;
    out.push_back(std::move(s));
  }
  return out;
}

json to_json(const RankGrowthSample& s) {
  return json{{"index", s.index}, {"stratum", s.stratum}, {"radial", s.radial},
              {"z_verified", s.z_verified}, {"rank_R", to_json(s.R)}, {"kernel_R", s.kernel_R},
              {"rank_L", to_json(s.L)}, {"pass", s.pass}};
}

json to_json(const RankGrowthReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back(to_json(s));
  return json{{"kind", "rank_growth"}, {"k", r.k}, {"nu", r.nu}, {"N", r.N}, {"ring", r.ring},
              {"seed", r.seed}, {"pass", r.pass}, {"samples", samples}};
}

json to_json(const N1Report& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back(json{{"index", s.index}, {"stratum", s.stratum}, {"z_verified", s.z_verified},
                           {"block_ranks", s.block_ranks}, {"block_exact", s.block_exact}});
  json table = json::array();
  for (std::size_t i = 0; i < r.min_rank_bound.size(); ++i)
    table.push_back(json{{"N", r.N0 + static_cast<int>(i)},
                         {"dim_fol_jets", r.dims[i]},
                         {"rank_lower_bound", r.min_rank_bound[i]}});
  return json{{"kind", "estimate_n1"}, {"k", r.k}, {"nu", r.nu}, {"N0", r.N0}, {"max_N", r.max_N},
              {"ring", r.ring}, {"seed", r.seed}, {"found", r.found},
              {"N1", r.found ? json(r.N1) : json(nullptr)}, {"table", table}, {"samples", samples}};
}

}  // namespace jetfol
