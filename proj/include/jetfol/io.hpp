#pragma once

// JSON forms of scalars, series, diffeomorphism jets, 1-form jets and
// residuals.  Terms are written sorted by (i+j, i); loaders validate every term
// and name the offending one in their error message.

#include <string>

#include "json.hpp"
#include "jetfol/compat.hpp"

namespace jetfol {

using json = nlohmann::ordered_json;

/// Parses text, turning syntax errors into InputError with line:column.
json parse_json_text(const std::string& text, const std::string& source);
json load_json_file(const std::string& path);

inline json scalar_to_json(const Rational& q) { return to_string(q); }
inline json scalar_to_json(const Fp& a) { return json{{"mod", a.modulus()}, {"val", a.value()}}; }

Rational rational_from_json(const json& j, const std::string& where);
Fp fp_from_json(const json& j, const PrimeField& field, const std::string& where);

inline Rational scalar_from_json(const json& j, const RationalRing&, const std::string& where) {
  return rational_from_json(j, where);
}
inline Fp scalar_from_json(const json& j, const PrimeField& field, const std::string& where) {
  return fp_from_json(j, field, where);
}

template <class S>
json terms_to_json(const BiSeries<S>& f, int min_degree = 0) {
  json arr = json::array();
  for (const auto& t : f.terms())
    if (t.degree() >= min_degree) arr.push_back(json::array({t.i, t.j, scalar_to_json(t.c)}));
  return arr;
}

template <class S>
json to_json(const BiSeries<S>& f) {
  return json{{"order", f.order()}, {"terms", terms_to_json(f)}};
}

namespace detail {

int int_field(const json& j, const char* key, const std::string& where);

template <class S>
BiSeries<S> terms_from_json(const json& arr, const ring_t<S>& ring, int order, const std::string& where,
                            int min_degree = 0) {
  if (!arr.is_array()) throw InputError(where + ": expected an array of [i, j, coefficient] terms");
  std::vector<typename BiSeries<S>::Term> terms;
  for (std::size_t n = 0; n < arr.size(); ++n) {
    const auto& t = arr[n];
    const std::string here = where + " term #" + std::to_string(n) + " " + t.dump();
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      throw InputError(here + ": expected [i, j, coefficient] with integer exponents");
    const int i = t[0].get<int>(), jj = t[1].get<int>();
    if (i < 0 || jj < 0) throw InputError(here + ": negative exponent");
    if (i + jj > order) throw InputError(here + ": degree " + std::to_string(i + jj) + " exceeds order " +
                                         std::to_string(order));
    if (i + jj < min_degree)
      throw InputError(here + ": degree below " + std::to_string(min_degree) + " is not allowed here");
    for (const auto& prev : terms)
      if (prev.i == i && prev.j == jj) throw InputError(here + ": duplicate monomial");
    terms.push_back({i, jj, scalar_from_json(t[2], ring, here)});
  }
  return BiSeries<S>::from_terms(ring, order, std::move(terms));
}

}  // namespace detail

template <class S>
BiSeries<S> series_from_json(const json& j, const ring_t<S>& ring, const std::string& where = "series") {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const int order = detail::int_field(j, "order", where);
  if (order < 0) throw InputError(where + ": negative order");
  if (!j.contains("terms")) throw InputError(where + ": missing \"terms\"");
  return detail::terms_from_json<S>(j["terms"], ring, order, where);
}

template <class S>
json to_json(const DiffeoJet<S>& f) {
  return json{{"order", f.order()}, {"phi", terms_to_json(f.phi_perturbation(), 2)},
              {"psi", terms_to_json(f.psi_perturbation(), 2)}};
}

template <class S>
DiffeoJet<S> diffeo_from_json(const json& j, const ring_t<S>& ring, const std::string& where = "diffeo") {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const int order = detail::int_field(j, "order", where);
  if (order < 1) throw InputError(where + ": order must be >= 1");
  for (const char* key : {"phi", "psi"})
    if (!j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  auto a = detail::terms_from_json<S>(j["phi"], ring, order, where + ".phi", 2);
  auto b = detail::terms_from_json<S>(j["psi"], ring, order, where + ".psi", 2);
  return DiffeoJet<S>::from_perturbation(a, b);
}

template <class S>
json to_json(const OneFormJet<S>& w) {
  return json{{"chart", w.chart()}, {"k", w.k()}, {"nu", w.nu()}, {"order", w.order()},
              {"P", terms_to_json(w.P())}, {"Q", terms_to_json(w.Q())}};
}

template <class S>
OneFormJet<S> oneform_from_json(const json& j, const ring_t<S>& ring, const std::string& where = "form") {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const int chart = detail::int_field(j, "chart", where);
  const int k = detail::int_field(j, "k", where);
  const int nu = detail::int_field(j, "nu", where);
  const int order = detail::int_field(j, "order", where);
  if (order < 0) throw InputError(where + ": negative order");
  for (const char* key : {"P", "Q"})
    if (!j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  auto P = detail::terms_from_json<S>(j["P"], ring, order, where + ".P");
  auto Q = detail::terms_from_json<S>(j["Q"], ring, order, where + ".Q");
  try {
    return OneFormJet<S>(chart, RawForm<S>{P, Q}, k, nu);
  } catch (const DomainError& e) {
    throw InputError(where + ": " + e.what());
  }
}

template <class S>
json to_json(const Residual<S>& r) {
  return json{{"order", r.f.f.order()}, {"terms", terms_to_json(r.f.f)}, {"valid_order", r.valid_order}};
}

template <class S>
json to_json(const RawForm<S>& w) {
  return json{{"order", w.order()}, {"P", terms_to_json(w.P)}, {"Q", terms_to_json(w.Q)}};
}

}  // namespace jetfol
