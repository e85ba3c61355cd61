// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jetfol/cli.hpp"
#include "jetfol/harden.hpp"
#include "test_support.hpp"

using namespace jetfol;
using namespace testdata;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Found certificates collected along the way, re-checked by criterion 7.
struct Witness {
  std::string label;
  int N = 0, nu = 0;
  std::function<Residual<Rational>()> eval_q;
  std::function<Residual<Fp>()> eval_p;
};
std::vector<Witness> g_witnesses;

template <class S>
void keep_witness(const std::string& label, const DiffeoJet<S>& phi, const Certificate<S>& c) {
  if (c.verdict != Verdict::foliation_found) return;
  Witness w;
  w.label = label;
  w.N = c.N;
  w.nu = c.nu;
  auto f = [phi, a = *c.w1, b = *c.w2] { return evaluate_E(phi, a, b); };
  if constexpr (std::is_same_v<S, Rational>)
    w.eval_q = f;
  else
    w.eval_p = f;
  g_witnesses.push_back(std::move(w));
}

Outcome c1_dims() {
  int rows = 0;
  for (int k = 0; k <= 3; ++k)
    for (int nu = 0; nu <= 2; ++nu) {
      auto out = run_command(json{{"command", "dims"}, {"k", k}, {"nu", nu}, {"max", 15}}, 1);
      if (out.result["increment_check"] != true) return {false, "k=" + std::to_string(k) + " nu=" + std::to_string(nu)};
      const auto from = out.result["stable_from"].get<int>();
      for (const auto& row : out.result["table"]) {
        if (row["M"].get<int>() < from) continue;
        if (row["increment"].get<long long>() != 4LL * k + 4) return {false, "increment mismatch"};
        ++rows;
      }
    }
  return {true, std::to_string(rows) + " increments equal 4k+4 (M >= max(k, nu))"};
}

Outcome c2_truncation() {
  std::mt19937_64 g(20240);
  int cases = 0;
  for (auto [k, nu] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}})
    for (int t = 0; t < 100; ++t) {
      const int N = static_cast<int>(g() % 7);
      const int hi = N + 2 * nu + 3;
      auto phi = random_diffeo(g, hi);
      auto w1 = random_oneform(g, 1, k, nu, hi);
      auto w2 = random_oneform(g, 2, k, nu, hi);
      auto base = truncated_E(phi, w1, w2, N);
      if (base.valid_order != N + 2 * nu) return {false, "valid order"};
      auto phi2 = perturb_band(phi, {N + 1, hi}, Rational(7), g());
      OneFormJet<Rational> v1(1, w1.form() + RawForm<Rational>{random_chart_series(g, 1, k, hi, N + nu + 1),
                                                                random_chart_series(g, 1, k, hi, N + nu + 1)},
                              k, nu);
      OneFormJet<Rational> v2(2, w2.form() + RawForm<Rational>{random_chart_series(g, 2, k, hi, N + nu + 1),
                                                                random_chart_series(g, 2, k, hi, N + nu + 1)},
                              k, nu);
      auto full = evaluate_E(phi2, v1, v2);
      if (full.valid_order < base.valid_order || !(jet(full.f.f, base.valid_order) == base.f.f))
        return {false, "instance " + std::to_string(cases) + " changed"};
      ++cases;
    }
  return {true, std::to_string(cases) + " instances invariant"};
}

Outcome c3_radial() {
  std::ostringstream ranks;
  for (int N = 1; N <= 8; ++N) {
    auto rep = rank_growth_check<Rational>(kQ, 1, 1, N, 2, derive_seed(3, {static_cast<std::uint64_t>(N)}), {}, 0,
                                           StratumChoice::radial);
    for (const auto& s : rep.samples)
      if (!s.radial || !s.L.exact || s.L.rank != static_cast<std::size_t>(N + 2))
        return {false, "N=" + std::to_string(N) + " rank " + std::to_string(s.L.rank)};
    ranks << (N > 1 ? "," : "") << rep.samples.front().L.rank;
  }
  return {true, "ranks " + ranks.str() + " for N=1..8, exact"};
}

Outcome c4_non_radial() {
  int samples = 0;
  for (int nu : {1, 2})
    for (int N = 2; N <= 8; ++N) {
      auto rep = rank_growth_check<Rational>(
          kQ, 1, nu, N, 20, derive_seed(4, {static_cast<std::uint64_t>(nu), static_cast<std::uint64_t>(N)}), {}, 0,
          StratumChoice::non_radial);
      for (const auto& s : rep.samples) {
        if (s.radial || s.kernel_R > 1 || s.R.rank < static_cast<std::size_t>(N))
          return {false, "nu=" + std::to_string(nu) + " N=" + std::to_string(N) + " kernel " + std::to_string(s.kernel_R)};
        ++samples;
      }
    }
  return {true, std::to_string(samples) + " samples with dim ker <= 1 and rank >= N"};
}

Outcome c5_rank_growth() {
  RankPolicy pol;
  pol.method = RankPolicy::Method::modular;
  int points = 0;
  std::size_t min_excess = 1000;
  for (int N = 2; N <= 8; ++N)
    for (int s = 0; s < 8; ++s) {
      auto z = sample_z_point<Rational>(kQ, 0, 1, N, derive_seed(5, {static_cast<std::uint64_t>(N)}),
                                        static_cast<std::uint64_t>(s));
      if (!z.verify()) return {false, "Z-point not verified"};
      std::vector<Direction<Rational>> dirs;
      for (const auto& slot : phi_slots(N + 1)) dirs.push_back(unit_direction<Rational>(slot, kQ, N + 1));
      const int M = N + 2;
      auto J = degree_rows(build_jacobian(z.phi(), z.w1(), z.w2(), M, dirs, 0), M);
      auto r = certified_rank(J, pol);
      if (!r.consensus || r.modular.size() != 3) return {false, "no consensus over 3 primes"};
      if (r.rank < static_cast<std::size_t>(N)) return {false, "N=" + std::to_string(N) + " rank " + std::to_string(r.rank)};
      min_excess = std::min(min_excess, r.rank - N);
      ++points;
    }
  return {points >= 50, std::to_string(points) + " Z-points, rank - N >= " + std::to_string(min_excess) +
                            ", 3-prime consensus"};
}

Outcome c6_oracle() {
  const PrimeField F3(3);
  int agree = 0, total = 0, found = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto phi = perturb_band(DiffeoJet<Fp>::identity(F3, 4), DegreeBand(1, 4), Rational(1), derive_seed(6, {s}));
    for (int nu : {0, 1})
      for (int N = 1; N <= 3; ++N) {
        auto p = jet(phi, N + 1);
        DecidePolicy pol;
        pol.seed = s;
        auto c = decide_type(p, 0, nu, N, pol);
        auto o = brute_force_oracle(p, 0, nu, N);
        ++total;
        if (c.exact && (c.verdict == Verdict::foliation_found) == o.exists) ++agree;
        if (o.exists) ++found;
        keep_witness("F3 seed " + std::to_string(s), p, c);
      }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(found) +
                              " foliated)"};
}

Outcome c8_genericity(int& N1) {
  auto rep = estimate_N1<Rational>(kQ, 0, 1, 30, 4, 8);
  if (!rep.found) return {false, "no N1 <= 30"};
  N1 = rep.N1;
  const int W = N1 + 2;
  int obstructed = 0, inconclusive = 0;
  std::ostringstream log;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto phi = perturb_band(DiffeoJet<Rational>::identity(kQ, W + 1), DegreeBand(1, W + 1), Rational(1),
                            derive_seed(8, {s}));
    DecidePolicy pol;
    pol.seed = s;
    auto c = decide_type(phi, 0, 1, W, pol);
    keep_witness("generic seed " + std::to_string(s), phi, c);
    if (c.verdict == Verdict::obstructed) ++obstructed;
    if (c.verdict == Verdict::inconclusive) {
      ++inconclusive;
      log << " inconclusive@" << s;
    }
  }
  return {obstructed >= 9, "N1=" + std::to_string(N1) + ", " + std::to_string(obstructed) + "/10 obstructed at order " +
                               std::to_string(W) + log.str()};
}

Outcome c9_harden() {
  HardenRequest req;
  req.phi = DiffeoJet<Rational>::identity(kQ, 2);
  req.N0 = 2;
  req.eps = 1;
  req.types = {{0, 1}};
  req.seed = 1;
  auto a = harden(req);
  auto b = harden(req);
  auto chk = check_harden(req, a);
  const bool replay = to_json(a) == to_json(b);
  const bool ok = a.success && chk.ok() && replay && a.distance < req.eps &&
                  jet(a.phi_hat, 2) == jet(req.phi, 2) && a.certificates.size() == 1 &&
                  a.certificates[0].verdict == Verdict::obstructed;
  return {ok, "working order " + (a.working_orders.empty() ? std::string("-") : std::to_string(a.working_orders[0])) +
                  ", distance " + to_string(a.distance) + ", replay " + (replay ? "equal" : "differs")};
}

Outcome c7_witnesses() {
  // a few over Q as well
  for (int k = 0; k <= 2; ++k) {
    auto phi = DiffeoJet<Rational>::from_perturbation(Q(kQ, 6), Q::monomial(kQ, 6, 2, 0, Rational(1)));
    DecidePolicy pol;
    pol.seed = static_cast<std::uint64_t>(k);
    keep_witness("shear k=" + std::to_string(k), phi, decide_type(phi, k, 0, 5, pol));
    auto id = DiffeoJet<Rational>::identity(kQ, 6);
    keep_witness("identity k=" + std::to_string(k), id, decide_type(id, k, 1, 4, pol));
  }
  int ok = 0;
  for (const auto& w : g_witnesses) {
    const int need = w.N + 2 * w.nu;
    bool good;
    if (w.eval_q) {
      auto r = w.eval_q();
      good = r.valid_order >= need && jet(r.f.f, need).is_zero();
    } else {
      auto r = w.eval_p();
      good = r.valid_order >= need && jet(r.f.f, need).is_zero();
    }
    if (!good) return {false, w.label + " does not re-verify"};
    ++ok;
  }
  return {ok > 0, std::to_string(ok) + " witnesses re-verified through evaluate_E"};
}

Outcome c10_algebra() {
  std::mt19937_64 g(1010);
  int cases = 0;
  for (int t = 0; t < 250; ++t) {
    const int n = 2 + static_cast<int>(g() % 3);
    // functoriality
    auto F = random_diffeo(g, n + 2), G = random_diffeo(g, n + 2);
    auto w = random_raw(g, n);
    auto lhs = pullback(compose(F, G), w);
    auto rhs = pullback(jet(G, n + 1), pullback(F, w));
    if (!(lhs == jet(rhs, lhs.order()))) return {false, "functoriality"};
    ++cases;
    // Leibniz
    HomVectorField<Rational> X(n, random_homogeneous(g, n + 3, n), random_homogeneous(g, n + 3, n));
    auto h = random_series(g, n + 3);
    auto w3 = random_raw(g, n + 3);
    auto Xh = X.a() * partial_x(h) + X.b() * partial_y(h);
    auto left = lie_derivative(X, multiply(h, w3));
    auto right = multiply(Xh, w3) + multiply(h, lie_derivative(X, w3));
    if (!(left == jet(right, left.order()))) return {false, "Leibniz"};
    ++cases;
    // wedge: antisymmetry and bilinearity
    auto a = random_raw(g, n), b = random_raw(g, n), c = random_raw(g, n);
    auto s = nonzero_rational(g);
    if (!(wedge(a, b).f == scale(wedge(b, a).f, Rational(-1))) || !wedge(a, a).f.is_zero() ||
        !(wedge(a + scale(c, s), b).f == wedge(a, b).f + scale(wedge(c, b).f, s)))
      return {false, "wedge"};
    ++cases;
    // dual-number differential in a form slot equals substitution into the slot
    const int k = static_cast<int>(g() % 2), nu = static_cast<int>(g() % 2), hi = 3 + nu;
    auto phi = random_diffeo(g, hi + 1);
    auto w1 = random_oneform(g, 1, k, nu, hi);
    auto w2 = random_oneform(g, 2, k, nu, hi);
    auto d = random_raw(g, hi);
    auto zero = Q(kQ, hi + 1);
    const int which = 1 + static_cast<int>(g() % 2);
    RawForm<Dual<Rational>> l1 = lift_dual(w1.form()), l2 = lift_dual(w2.form());
    RawForm<Dual<Rational>> dd{make_dual(w1.form().P, d.P), make_dual(w1.form().Q, d.Q)};
    if (which == 2) dd = {make_dual(w2.form().P, d.P), make_dual(w2.form().Q, d.Q)};
    auto r = which == 1 ? residual_raw(dual_diffeo(phi, zero, zero), dd, l2)
                        : residual_raw(dual_diffeo(phi, zero, zero), l1, dd);
    auto sub = dE_omega(phi, w1, w2, which, d);
    const int m = std::min(dual_part(r).valid_order, sub.valid_order);
    if (!(jet(dual_part(r).f.f, m) == jet(sub.f.f, m))) return {false, "dual vs slot substitution"};
    ++cases;
  }
  return {cases == 1000, std::to_string(cases) + " cases"};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failed = 0;
  int N1 = -1;
  auto run = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& f) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs / %.0fs", secs, limit_s);
    std::cout << "criterion " << id << " " << (pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << " ["
              << buf << (in_time ? "" : ", over time") << "]" << std::endl;
  };
  run(1, "dimension formula", 1, c1_dims);
  run(2, "truncation invariance", 30, c2_truncation);
  run(3, "radial rank", 10, c3_radial);
  run(4, "non-radial kernel", 60, c4_non_radial);
  run(5, "rank growth on Z", 300, c5_rank_growth);
  run(6, "oracle equivalence", 600, c6_oracle);
  run(8, "genericity exhibit", 1200, [&] { return c8_genericity(N1); });
  run(7, "witness soundness", 30, c7_witnesses);
  run(9, "harden contract", 1800, c9_harden);
  run(10, "algebra properties", 60, c10_algebra);
  std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : std::string("all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
