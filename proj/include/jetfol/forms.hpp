#pragma once

// 1-form jets P dx + Q dy, their wedge products, pullbacks and Lie derivatives.

#include <optional>
#include <string>
#include <vector>

#include "jetfol/germs.hpp"
#include "jetfol/series.hpp"

namespace jetfol {

/// Unconstrained pair (P, Q) standing for P dx + Q dy.
template <class S>
struct RawForm {
  BiSeries<S> P;
  BiSeries<S> Q;

  int order() const { return std::min(P.order(), Q.order()); }
  const ring_t<S>& ring() const { return P.ring(); }
  bool is_zero() const { return P.is_zero() && Q.is_zero(); }

  static RawForm zero(ring_t<S> ring, int order) { return {BiSeries<S>(ring, order), BiSeries<S>(ring, order)}; }
  static RawForm dx(ring_t<S> ring, int order) {
    return {BiSeries<S>::constant(ring, order, ring.one()), BiSeries<S>(ring, order)};
  }
  static RawForm dy(ring_t<S> ring, int order) {
    return {BiSeries<S>(ring, order), BiSeries<S>::constant(ring, order, ring.one())};
  }

  friend bool operator==(const RawForm&, const RawForm&) = default;
};

template <class S>
RawForm<S> operator+(const RawForm<S>& a, const RawForm<S>& b) {
  return {a.P + b.P, a.Q + b.Q};
}
template <class S>
RawForm<S> operator-(const RawForm<S>& a, const RawForm<S>& b) {
  return {a.P - b.P, a.Q - b.Q};
}
template <class S>
RawForm<S> scale(const RawForm<S>& a, const S& c) {
  return {scale(a.P, c), scale(a.Q, c)};
}
/// g * omega.
template <class S>
RawForm<S> multiply(const BiSeries<S>& g, const RawForm<S>& a) {
  return {g * a.P, g * a.Q};
}
template <class S>
RawForm<S> jet(const RawForm<S>& a, int n) {
  return {jet(a.P, n), jet(a.Q, n)};
}
template <class S>
RawForm<S> padded_to(const RawForm<S>& a, int n) {
  return {a.P.padded_to(n), a.Q.padded_to(n)};
}
template <class S>
RawForm<S> homogeneous_part(const RawForm<S>& a, int n) {
  return {homogeneous_part(a.P, n), homogeneous_part(a.Q, n)};
}

/// Order of vanishing of the pair; nullopt if both are zero jets.
template <class S>
std::optional<int> order_of_vanishing(const RawForm<S>& a) {
  auto p = order_of_vanishing(a.P), q = order_of_vanishing(a.Q);
  if (!p) return q;
  if (!q) return p;
  return std::min(*p, *q);
}

template <class S>
int valuation_bound(const RawForm<S>& a) {
  return std::min(valuation_bound(a.P), valuation_bound(a.Q));
}

/// A 1-form jet in one of the two charts, of type (k, nu).
///
/// Chart 1 forms are polynomial of degree <= k in x, chart 2 forms of degree
/// <= k in y; the order of vanishing at the origin is exactly nu.
template <class S>
class OneFormJet {
 public:
  OneFormJet(int chart, RawForm<S> form, int k, int nu) : chart_(chart), form_(std::move(form)), k_(k), nu_(nu) {
    if (chart != 1 && chart != 2) throw DomainError("chart must be 1 or 2");
    if (k < 0 || nu < 0) throw DomainError("type (k, nu) must be non-negative");
    if (form_.P.order() != form_.Q.order()) throw DomainError("P and Q have different working orders");
    if (form_.is_zero()) throw DomainError("1-form jet is zero");
    for (const auto* f : {&form_.P, &form_.Q}) {
      const int deg = chart == 1 ? degree_in_x(*f) : degree_in_y(*f);
      if (deg > k)
        throw DomainError(std::string("chart ") + std::to_string(chart) + " form has degree " +
                          std::to_string(deg) + " in " + (chart == 1 ? "x" : "y") + " above k = " +
                          std::to_string(k));
    }
    auto v = order_of_vanishing(form_);
    if (!v || *v != nu)
      throw DomainError("declared vanishing order " + std::to_string(nu) + " but the form vanishes to order " +
                        (v ? std::to_string(*v) : std::string("> working order")));
  }

  int chart() const { return chart_; }
  int k() const { return k_; }
  int nu() const { return nu_; }
  int order() const { return form_.P.order(); }
  const RawForm<S>& form() const { return form_; }
  const BiSeries<S>& P() const { return form_.P; }
  const BiSeries<S>& Q() const { return form_.Q; }
  const ring_t<S>& ring() const { return form_.P.ring(); }

  /// Degree-nu homogeneous part.
  RawForm<S> leading() const { return homogeneous_part(form_, nu_); }

  friend bool operator==(const OneFormJet&, const OneFormJet&) = default;

 private:
  int chart_;
  RawForm<S> form_;
  int k_;
  int nu_;
};

template <class S>
OneFormJet<S> jet(const OneFormJet<S>& w, int n) {
  return OneFormJet<S>(w.chart(), jet(w.form(), n), w.k(), w.nu());
}

/// f dx^dy.
template <class S>
struct TwoFormJet {
  BiSeries<S> f;
  friend bool operator==(const TwoFormJet&, const TwoFormJet&) = default;
};

/// phi^n d/dx + psi^n d/dy with homogeneous components of degree n.
template <class S>
class HomVectorField {
 public:
  HomVectorField(int n, BiSeries<S> a, BiSeries<S> b) : n_(n), a_(std::move(a)), b_(std::move(b)) {
    if (n < 2) throw DomainError("homogeneous vector field degree must be >= 2");
    for (const auto* f : {&a_, &b_})
      for (const auto& t : f->terms())
        if (t.degree() != n) throw DomainError("vector field component is not homogeneous of degree " + std::to_string(n));
  }

  int degree() const { return n_; }
  const BiSeries<S>& a() const { return a_; }
  const BiSeries<S>& b() const { return b_; }

 private:
  int n_;
  BiSeries<S> a_;
  BiSeries<S> b_;
};

/// alpha ^ beta = (P_a Q_b - Q_a P_b) dx^dy.
template <class S>
TwoFormJet<S> wedge(const RawForm<S>& a, const RawForm<S>& b) {
  return {a.P * b.Q - a.Q * b.P};
}

template <class S>
TwoFormJet<S> wedge(const OneFormJet<S>& a, const OneFormJet<S>& b) {
  return wedge(a.form(), b.form());
}

/// Phi^* omega = (P o Phi) d(phi) + (Q o Phi) d(psi).  The output order is
/// min(omega order, Phi order - 1): composing needs Phi to the form's order and
/// the differentials lose one degree.
template <class S>
RawForm<S> pullback(const DiffeoJet<S>& phi, const RawForm<S>& w) {
  const int need = w.order();
  if (phi.order() < 1) throw DomainError("pullback needs a diffeomorphism jet of order >= 1");
  auto Pc = compose(w.P, phi.phi(), phi.psi());
  auto Qc = compose(w.Q, phi.phi(), phi.psi());
  auto phix = partial_x(phi.phi()), phiy = partial_y(phi.phi());
  auto psix = partial_x(phi.psi()), psiy = partial_y(phi.psi());
  RawForm<S> out{Pc * phix + Qc * psix, Pc * phiy + Qc * psiy};
  const int n = std::min(need, phi.order() - 1);
  return jet(out, std::min(n, out.order()));
}

template <class S>
RawForm<S> pullback(const DiffeoJet<S>& phi, const OneFormJet<S>& w) {
  return pullback(phi, w.form());
}

/// L_X omega = (a P_x + b P_y) dx + (a Q_x + b Q_y) dy + P da + Q db.
template <class S>
RawForm<S> lie_derivative(const HomVectorField<S>& X, const RawForm<S>& w) {
  const int n = w.order();
  if (n < 1) throw DomainError("Lie derivative needs a form of order >= 1");
  auto a = X.a().order() >= n ? jet(X.a(), n) : X.a().padded_to(n);
  auto b = X.b().order() >= n ? jet(X.b(), n) : X.b().padded_to(n);
  auto Px = partial_x(w.P), Py = partial_y(w.P), Qx = partial_x(w.Q), Qy = partial_y(w.Q);
  auto ax = partial_x(a), ay = partial_y(a), bx = partial_x(b), by = partial_y(b);
  return {a * Px + b * Py + w.P * ax + w.Q * bx, a * Qx + b * Qy + w.P * ay + w.Q * by};
}

/// Radial iff x P + y Q vanishes identically.
template <class S>
bool is_radial(const RawForm<S>& leading) {
  if (leading.is_zero()) throw DomainError("radial test on a zero form");
  const int n = leading.order() + 1;
  auto P = leading.P.padded_to(n), Q = leading.Q.padded_to(n);
  auto x = BiSeries<S>::x(leading.ring(), n), y = BiSeries<S>::y(leading.ring(), n);
  return (x * P + y * Q).is_zero();
}

// ---------------------------------------------------------------------------
// Homogeneous polynomials in (x, y) as dense coefficient vectors c[i] of x^i y^{d-i}.

template <class S>
struct HomPoly {
  int degree = 0;
  std::vector<S> c;  // size degree + 1, or empty for the zero polynomial

  bool is_zero() const {
    for (const auto& v : c)
      if (!jetfol::is_zero(v)) return false;
    return true;
  }
};

template <class S>
HomPoly<S> hom_from_series(const BiSeries<S>& f, int degree) {
  HomPoly<S> h{degree, std::vector<S>(degree + 1, f.ring().zero())};
  for (const auto& t : f.terms()) {
    if (t.degree() != degree) throw DomainError("series is not homogeneous of degree " + std::to_string(degree));
    h.c[t.i] = t.c;
  }
  return h;
}

template <class S>
BiSeries<S> hom_to_series(const HomPoly<S>& h, const ring_t<S>& ring, int order) {
  std::vector<typename BiSeries<S>::Term> terms;
  for (int i = 0; i < static_cast<int>(h.c.size()); ++i) terms.push_back({i, h.degree - i, h.c[i]});
  return BiSeries<S>::from_terms(ring, order, std::move(terms));
}

namespace detail {

// Univariate polynomials over a field, low-to-high coefficients, trimmed.
template <class S>
void trim(std::vector<S>& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

template <class S>
std::vector<S> poly_mod(std::vector<S> a, const std::vector<S>& b) {
  trim(a);
  const S lead_inv = inverse(b.back());
  while (a.size() >= b.size()) {
    S q = a.back() * lead_inv;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= q * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

template <class S>
std::vector<S> poly_gcd(std::vector<S> a, std::vector<S> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    S inv = inverse(a.back());
    for (auto& v : a) v *= inv;
  }
  return a;
}

template <class S>
std::vector<S> poly_div_exact(std::vector<S> a, const std::vector<S>& b) {
  trim(a);
  if (a.size() < b.size()) {
    if (a.empty()) return {};
    throw DomainError("inexact polynomial division");
  }
  std::vector<S> q(a.size() - b.size() + 1, a.front() - a.front());
  const S lead_inv = inverse(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    S c = a.back() * lead_inv;
    const std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
    a.pop_back();
    trim(a);
  }
  if (!a.empty()) throw DomainError("inexact polynomial division");
  return q;
}

}  // namespace detail

/// Monic (in the (degree, i) sense: top x-coefficient 1) gcd of homogeneous
/// polynomials.  Dehomogenizes at y = 1 and restores the power of y.
template <class S>
HomPoly<S> hom_gcd(const HomPoly<S>& f, const HomPoly<S>& g, const ring_t<S>& ring) {
  if (f.is_zero()) {
    if (g.is_zero()) return g;
    return hom_gcd(g, g, ring);
  }
  if (g.is_zero()) return hom_gcd(f, f, ring);
  auto pf = f.c, pg = g.c;
  detail::trim(pf);
  detail::trim(pg);
  // y-multiplicity = degree - deg_x; lowest x power gives x-multiplicity, kept in the gcd via the polynomial
  const int yf = f.degree - static_cast<int>(pf.size()) + 1;
  const int yg = g.degree - static_cast<int>(pg.size()) + 1;
  auto p = detail::poly_gcd(pf, pg);
  const int dx = static_cast<int>(p.size()) - 1;
  const int ym = std::min(yf, yg);
  HomPoly<S> h{dx + ym, std::vector<S>(dx + ym + 1, ring.zero())};
  for (int i = 0; i <= dx; ++i) h.c[i] = p[i];
  return h;
}

/// f / g for homogeneous polynomials, exact.
template <class S>
HomPoly<S> hom_div(const HomPoly<S>& f, const HomPoly<S>& g, const ring_t<S>& ring) {
  const int d = f.degree - g.degree;
  if (f.is_zero()) return HomPoly<S>{std::max(d, 0), std::vector<S>(std::max(d, 0) + 1, ring.zero())};
  if (d < 0) throw DomainError("hom_div: divisor has larger degree");
  auto q = detail::poly_div_exact(f.c, [&] {
    auto b = g.c;
    detail::trim(b);
    return b;
  }());
  // degree bookkeeping: y-multiplicities divide as well, so the x-coefficients determine the result
  HomPoly<S> h{d, std::vector<S>(d + 1, ring.zero())};
  for (std::size_t i = 0; i < q.size() && static_cast<int>(i) <= d; ++i) h.c[i] = q[i];
  return h;
}

template <class S>
HomPoly<S> hom_mul(const HomPoly<S>& f, const HomPoly<S>& g, const ring_t<S>& ring) {
  HomPoly<S> h{f.degree + g.degree, std::vector<S>(f.degree + g.degree + 1, ring.zero())};
  for (int i = 0; i <= f.degree; ++i)
    for (int j = 0; j <= g.degree; ++j) h.c[i + j] += f.c[i] * g.c[j];
  return h;
}

/// Factorization omega_i = H_i * eta of a wedge-free pair of homogeneous forms.
template <class S>
struct LeadingPair {
  HomPoly<S> H1;
  HomPoly<S> H2;
  HomPoly<S> eta_P;
  HomPoly<S> eta_Q;
};

/// Both forms homogeneous of degree nu (P, Q of degree nu).  Returns nullopt when
/// the forms are not proportional (nonzero wedge).  eta is primitive (gcd of its
/// components is 1), H1 is monic.
template <class S>
std::optional<LeadingPair<S>> leading_pair_parametrize(const RawForm<S>& w1, int nu1, const RawForm<S>& w2, int nu2) {
  if (w1.is_zero() || w2.is_zero()) throw DomainError("leading_pair_parametrize: zero form");
  const int n = nu1 + nu2;
  auto wd = wedge(padded_to(w1, std::max(n, w1.order())), padded_to(w2, std::max(n, w2.order())));
  if (!wd.f.is_zero()) return std::nullopt;
  const auto& ring = w1.ring();
  auto P1 = hom_from_series(w1.P, nu1), Q1 = hom_from_series(w1.Q, nu1);
  auto P2 = hom_from_series(w2.P, nu2), Q2 = hom_from_series(w2.Q, nu2);
  auto H1 = hom_gcd(P1, Q1, ring);
  LeadingPair<S> out;
  out.H1 = H1;
  out.eta_P = hom_div(P1, H1, ring);
  out.eta_Q = hom_div(Q1, H1, ring);
  // H2 from whichever eta component is nonzero
  if (!out.eta_P.is_zero())
    out.H2 = hom_div(P2, out.eta_P, ring);
  else
    out.H2 = hom_div(Q2, out.eta_Q, ring);
  return out;
}

}  // namespace jetfol
