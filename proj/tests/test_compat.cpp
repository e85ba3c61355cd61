#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace jetfol;
using namespace testdata;

namespace {

Q poly(int order, std::vector<Q::Term> t) { return Q::from_terms(kQ, order, std::move(t)); }

OneFormJet<Rational> form(int chart, int k, int nu, int order, std::vector<Q::Term> P, std::vector<Q::Term> Qt) {
  return OneFormJet<Rational>(chart, {poly(order, std::move(P)), poly(order, std::move(Qt))}, k, nu);
}

// d/ds E(Phi + s X) at s = 0, by Lagrange interpolation through s = 0..D.
Q derivative_by_interpolation(const DiffeoJet<Rational>& phi, const OneFormJet<Rational>& w1,
                              const OneFormJet<Rational>& w2, const HomVectorField<Rational>& X, int D) {
  std::vector<Q> vals;
  for (int s = 0; s <= D; ++s) {
    auto a = X.a().padded_to(phi.order()), b = X.b().padded_to(phi.order());
    DiffeoJet<Rational> ps(phi.phi() + scale(a, Rational(s)), phi.psi() + scale(b, Rational(s)));
    vals.push_back(evaluate_E(ps, w1, w2).f.f);
  }
  // L_s'(0) for nodes 0..D
  Q out(kQ, vals[0].order());
  for (int s = 0; s <= D; ++s) {
    Rational w = 0;
    if (s == 0) {
      for (int m = 1; m <= D; ++m) w -= Rational(1, m);
    } else {
      Rational den = 1;
      for (int m = 0; m <= D; ++m)
        if (m != s) den *= Rational(s - m);
      Rational num = 1;
      for (int m = 1; m <= D; ++m)
        if (m != s) num *= Rational(-m);
      w = num / den;
    }
    out = out + scale(vals[s], w);
  }
  return out;
}

bool same_terms(const Q& a, const Q& b) { return a.terms() == b.terms(); }

}  // namespace

TEST_CASE("E examples") {
  auto id = identity_jet<Rational>(kQ, 4);
  auto dx1 = form(1, 0, 0, 3, {{0, 0, 1}}, {});
  auto dx2 = form(2, 0, 0, 3, {{0, 0, 1}}, {});
  auto dy1 = form(1, 0, 0, 3, {}, {{0, 0, 1}});
  auto dy2 = form(2, 0, 0, 3, {}, {{0, 0, 1}});
  CHECK(evaluate_E(id, dx1, dx2).vanishes());
  auto r = evaluate_E(id, dx1, dy2);
  CHECK(r.f.f == Q::constant(kQ, r.valid_order, 1));
  auto Phi = DiffeoJet<Rational>::from_perturbation(Q(kQ, 4), poly(4, {{2, 0, 1}}));
  auto r2 = evaluate_E(Phi, dy1, dy2);
  CHECK(r2.valid_order == 3);
  CHECK(r2.f.f == poly(3, {{1, 0, 2}}));
  CHECK(evaluate_E(Phi, dx1, dx2).vanishes());

  CHECK_THROWS_AS(evaluate_E(id, dx2, dx2), DomainError);
  CHECK_THROWS_AS(evaluate_E(id, dx1, dx1), DomainError);
  auto ydx2 = form(2, 0, 1, 3, {{1, 0, 1}}, {});
  CHECK_THROWS_AS(evaluate_E(id, dx1, ydx2), DomainError);
}

TEST_CASE("valid order bookkeeping") {
  CHECK(valid_order_for(5, 4, 1, 4, 1) == 5);
  CHECK(valid_order_for(3, 9, 2, 9, 2) == 6);
  auto id = identity_jet<Rational>(kQ, 1);
  auto dx1 = form(1, 0, 0, 0, {{0, 0, 1}}, {});
  auto dx2 = form(2, 0, 0, 0, {{0, 0, 1}}, {});
  auto r = truncated_E(id, dx1, dx2, 0);
  CHECK(r.valid_order == 0);
  CHECK(r.vanishes());
  CHECK_THROWS_AS(truncated_E(id, dx1, dx2, 1), DomainError);
}

TEST_CASE("truncation invariance on random instances") {
  std::mt19937_64 g(2024);
  const int types[][2] = {{0, 0}, {0, 1}, {1, 1}, {2, 1}};
  for (auto [k, nu] : types)
    for (int t = 0; t < 8; ++t) {
      const int N = static_cast<int>(g() % 5);
      const int hi = N + 2 * nu + 3;
      auto phi = random_diffeo(g, hi);
      auto w1 = random_oneform(g, 1, k, nu, hi);
      auto w2 = random_oneform(g, 2, k, nu, hi);
      auto base = truncated_E(phi, w1, w2, N);
      REQUIRE(base.valid_order == N + 2 * nu);
      // perturb Phi above N+1 and w_i above N+nu, then evaluate the full E
      auto phi2 = perturb_band(phi, {N + 1, hi}, Rational(5), g());
      auto w1b = OneFormJet<Rational>(1, w1.form() + RawForm<Rational>{random_chart_series(g, 1, k, hi, N + nu + 1),
                                                                        random_chart_series(g, 1, k, hi, N + nu + 1)},
                                      k, nu);
      auto w2b = OneFormJet<Rational>(2, w2.form() + RawForm<Rational>{random_chart_series(g, 2, k, hi, N + nu + 1),
                                                                        random_chart_series(g, 2, k, hi, N + nu + 1)},
                                      k, nu);
      auto full = evaluate_E(phi2, w1b, w2b);
      REQUIRE(full.valid_order >= base.valid_order);
      CHECK(jet(full.f.f, base.valid_order) == base.f.f);
    }
}

TEST_CASE("Phi-derivative") {
  std::mt19937_64 g(77);
  for (int t = 0; t < 12; ++t) {
    const int k = static_cast<int>(g() % 2), nu = static_cast<int>(g() % 2) + (k == 0 ? 0 : 0);
    const int n = 2 + static_cast<int>(g() % 3);
    const int hi = n + 2 * nu + 1;
    auto phi = random_diffeo(g, hi);
    auto w1 = random_oneform(g, 1, k, nu, hi);
    auto w2 = random_oneform(g, 2, k, nu, hi);
    HomVectorField<Rational> X(n, random_homogeneous(g, hi, n), random_homogeneous(g, hi, n));
    auto d = dE_phi(phi, w1, w2, X);
    CHECK(d.value.f.f == evaluate_E(phi, w1, w2).f.f);
    auto interp = derivative_by_interpolation(phi, w1, w2, X, d.derivative.valid_order + 2);
    CHECK(d.derivative.f.f == jet(interp, d.derivative.valid_order));

    auto c = nonzero_rational(g);
    HomVectorField<Rational> cX(n, scale(X.a(), c), scale(X.b(), c));
    CHECK(dE_phi(phi, w1, w2, cX).derivative.f.f == scale(d.derivative.f.f, c));
    HomVectorField<Rational> zero(n, Q(kQ, hi), Q(kQ, hi));
    CHECK(dE_phi(phi, w1, w2, zero).derivative.vanishes());

    // leading part at the identity
    auto id = identity_jet<Rational>(kQ, hi);
    auto di = dE_phi(id, w1, w2, X);
    const int lead = n + 2 * nu - 1;
    if (lead <= di.derivative.valid_order) {
      auto L = lie_derivative(X, padded_to(w1.leading(), hi));
      auto expect = homogeneous_part(wedge(jet(L, hi - 1), jet(padded_to(w2.leading(), hi), hi - 1)).f, lead);
      CHECK(same_terms(homogeneous_part(di.derivative.f.f, lead), expect));
      for (int deg = 0; deg < lead; ++deg) CHECK(homogeneous_part(di.derivative.f.f, deg).is_zero());
    }
  }
}

TEST_CASE("form-slot derivatives") {
  std::mt19937_64 g(31);
  for (int t = 0; t < 20; ++t) {
    const int k = static_cast<int>(g() % 2), nu = static_cast<int>(g() % 2);
    const int hi = 4 + nu;
    auto phi = random_diffeo(g, hi + 1);
    auto w1 = random_oneform(g, 1, k, nu, hi);
    auto w2 = random_oneform(g, 2, k, nu, hi);
    auto d1 = random_oneform(g, 1, k, nu, hi);
    auto d2 = random_oneform(g, 2, k, nu, hi);
    auto e = evaluate_E(phi, w1, w2);
    CHECK(dE_omega(phi, w1, w2, 1, d1.form()).f.f == evaluate_E(phi, d1, w2).f.f);
    CHECK(dE_omega(phi, w1, w2, 2, d2.form()).f.f == evaluate_E(phi, w1, d2).f.f);
    CHECK(dE_omega(phi, w1, w2, 1, w1.form()).f.f == e.f.f);
    CHECK(dE_omega(phi, w1, w2, 2, w2.form()).f.f == e.f.f);
    // bilinearity
    auto s = nonzero_rational(g);
    OneFormJet<Rational> comb(1, w1.form() + scale(d1.form(), s), k, nu);
    if (order_of_vanishing(comb.form()) == nu) {
      auto lhs = evaluate_E(phi, comb, w2).f.f;
      CHECK(lhs == e.f.f + scale(evaluate_E(phi, d1, w2).f.f, s));
    }
    // gauge: scaling w2 scales f
    OneFormJet<Rational> w2s(2, scale(w2.form(), s), k, nu);
    CHECK(evaluate_E(phi, w1, w2s).f.f == scale(e.f.f, s));
    // leading part at the identity is delta^{n1} ^ w2^nu
    auto id = identity_jet<Rational>(kQ, hi + 1);
    const int n1 = nu + 1;
    auto delta = homogeneous_part(random_raw(g, hi, n1), n1);
    auto r = dE_omega(id, w1, w2, 1, delta);
    CHECK(same_terms(homogeneous_part(r.f.f, n1 + nu), homogeneous_part(wedge(delta, w2.leading()).f, n1 + nu)));
  }
  CHECK_THROWS_AS(dE_omega(identity_jet<Rational>(kQ, 2), form(1, 0, 0, 1, {{0, 0, 1}}, {}),
                           form(2, 0, 0, 1, {{0, 0, 1}}, {}), 3, RawForm<Rational>::dx(kQ, 1)),
                  DomainError);
}

TEST_CASE("E over a prime field matches reduction") {
  std::mt19937_64 g(5);
  PrimeField F(32003);
  for (int t = 0; t < 10; ++t) {
    auto phi = random_diffeo(g, 5);
    auto w1 = random_oneform(g, 1, 1, 1, 4);
    auto w2 = random_oneform(g, 2, 1, 1, 4);
    auto e = evaluate_E(phi, w1, w2);
    auto rw = [&](const OneFormJet<Rational>& w) {
      return OneFormJet<Fp>(w.chart(), {reduce_mod(w.P(), F), reduce_mod(w.Q(), F)}, w.k(), w.nu());
    };
    try {
      auto ef = evaluate_E(reduce_mod(phi, F), rw(w1), rw(w2));
      CHECK(ef.f.f == reduce_mod(e.f.f, F));
    } catch (const DomainError&) {
      // the leading part vanished mod p; nothing to compare
    }
  }
}
