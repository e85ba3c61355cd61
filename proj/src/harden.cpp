#include "jetfol/harden.hpp"

#include <algorithm>
#include <set>

namespace jetfol {

namespace {

void validate(const HardenRequest& req) {
  if (req.N0 < 1) throw DomainError("harden: N0 must be >= 1");
  if (sgn(req.eps) <= 0) throw DomainError("harden: epsilon must be positive");
  for (const auto& t : req.types)
    if (t.k < 0 || t.nu < 0) throw DomainError("harden: type must be non-negative");
  if (!req.working_orders.empty() && req.working_orders.size() != req.types.size())
    throw DomainError("harden: one working order per type expected");
  if (req.max_retries < 1) throw DomainError("harden: max_retries must be >= 1");
}

std::vector<int> working_orders(const HardenRequest& req) {
  if (!req.working_orders.empty()) return req.working_orders;
  std::vector<int> out;
  for (std::size_t i = 0; i < req.types.size(); ++i) {
    const auto& t = req.types[i];
    auto rep = estimate_N1<Rational>(RationalRing{}, t.k, t.nu, req.n1_max, req.n1_samples,
                                     derive_seed(req.seed, {0x4e31, i}), 1, {}, req.policy.jobs);
    if (!rep.found)
      throw DomainError("harden: no rank threshold up to N = " + std::to_string(req.n1_max) + " for type (" +
                        std::to_string(t.k) + ", " + std::to_string(t.nu) + ")");
    out.push_back(rep.N1 + 2);
  }
  return out;
}

std::uint64_t decide_seed(std::uint64_t seed, int stage, int retry, std::size_t type) {
  return derive_seed(seed, {0x57a9e, static_cast<std::uint64_t>(stage), static_cast<std::uint64_t>(retry), type});
}

}  // namespace

HardenResult harden(const HardenRequest& req) {
  validate(req);
  HardenResult res;
  res.types = req.types;
  res.phi_hat = req.phi;
  if (req.types.empty()) {
    res.success = true;
    res.jet_preserved = true;
    return res;
  }
  res.working_orders = working_orders(req);
  const int top = *std::max_element(res.working_orders.begin(), res.working_orders.end());
  for (int w : res.working_orders)
    if (w + 1 <= req.N0)
      throw DomainError("harden: working order " + std::to_string(w) + " leaves no degrees above N0 = " +
                        std::to_string(req.N0));
  DiffeoJet<Rational> base = req.phi;
  if (base.order() < top + 1) {
    if (base.order() < req.N0)
      throw DomainError("harden: Phi known only to order " + std::to_string(base.order()) + " < N0");
    res.padded_from = base.order();
    base = padded_to(base, top + 1);
  }
  const std::set<int> stages(res.working_orders.begin(), res.working_orders.end());
  DiffeoJet<Rational> current = base;
  std::vector<Certificate<Rational>> certs(req.types.size());
  int n = 0;
  for (int Nn : stages) {
    ++n;
    Rational bound = req.eps / (Rational(1) * (mpz_class(1) << n));
    bound.canonicalize();
    const DegreeBand band(req.N0, Nn + 1);
    bool accepted = false;
    for (int r = 0; r < req.max_retries && !accepted; ++r) {
      HardenAttempt at;
      at.stage = n;
      at.retry = r;
      at.band_lo = band.lo;
      at.band_hi = band.hi;
      at.bound = bound;
      at.seed = derive_seed(req.seed, {0xba4d, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)});
      auto cand = perturb_band(current, band, bound, at.seed);
      bool all = true;
      std::vector<Certificate<Rational>> got(req.types.size());
      for (std::size_t t = 0; t < req.types.size(); ++t) {
        if (res.working_orders[t] > Nn) continue;
        DecidePolicy pol = req.policy;
        pol.seed = decide_seed(req.seed, n, r, t);
        got[t] = decide_type(cand, req.types[t].k, req.types[t].nu, res.working_orders[t], pol);
        at.verdicts.push_back(to_string(got[t].verdict));
        all = all && got[t].verdict == Verdict::obstructed;
        if (!all) break;  // later types need not be tried
      }
      at.accepted = all;
      res.log.push_back(at);
      if (all) {
        accepted = true;
        current = cand;
        res.budget += bound;
        for (std::size_t t = 0; t < req.types.size(); ++t)
          if (res.working_orders[t] <= Nn) certs[t] = got[t];
      }
    }
    if (!accepted) {
      res.phi_hat = current;
      res.failure = "stage " + std::to_string(n) + " (working order " + std::to_string(Nn) + "): " +
                    std::to_string(req.max_retries) + " retries exhausted";
      return res;
    }
  }
  res.phi_hat = current;
  res.certificates = certs;
  res.jet_preserved = jet(res.phi_hat, req.N0) == jet(req.phi, req.N0);
  res.distance = sup_distance(res.phi_hat, base);
  res.success = res.jet_preserved && res.distance < req.eps;
  if (!res.success) res.failure = "contract check failed";
  return res;
}

HardenCheck check_harden(const HardenRequest& req, const HardenResult& res) {
  HardenCheck c;
  const int n = res.phi_hat.order();
  const auto base = req.phi.order() >= n ? jet(req.phi, n) : padded_to(req.phi, n);
  c.jet_preserved = req.phi.order() >= req.N0 && res.phi_hat.order() >= req.N0 &&
                    jet(res.phi_hat, req.N0) == jet(req.phi, req.N0);
  c.within_eps = sup_distance(res.phi_hat, base) < req.eps;
  c.all_obstructed = res.certificates.size() == req.types.size();
  for (std::size_t t = 0; t < res.certificates.size() && c.all_obstructed; ++t) {
    const auto& cert = res.certificates[t];
    DecidePolicy pol = req.policy;
    pol.seed = cert.seed;
    auto again = decide_type(res.phi_hat, req.types[t].k, req.types[t].nu, res.working_orders[t], pol);
    c.all_obstructed = again.verdict == Verdict::obstructed && cert.verdict == Verdict::obstructed;
  }
  return c;
}

json to_json(const HardenRequest& req) {
  json types = json::array();
  for (const auto& t : req.types) types.push_back(json::array({t.k, t.nu}));
  json j{{"phi", to_json(req.phi)}, {"N0", req.N0}, {"epsilon", to_string(req.eps)}, {"types", types},
         {"seed", req.seed}, {"max_retries", req.max_retries}, {"n1_max", req.n1_max},
         {"n1_samples", req.n1_samples}};
  if (!req.working_orders.empty()) j["working_orders"] = req.working_orders;
  return j;
}

json to_json(const HardenResult& res) {
  json types = json::array();
  for (const auto& t : res.types) types.push_back(json::array({t.k, t.nu}));
  json certs = json::array();
  for (const auto& c : res.certificates) certs.push_back(to_json(c));
  json log = json::array();
  for (const auto& a : res.log)
    log.push_back(json{{"stage", a.stage}, {"retry", a.retry}, {"band", json::array({a.band_lo, a.band_hi})},
                       {"bound", to_string(a.bound)}, {"seed", a.seed}, {"verdicts", a.verdicts},
                       {"accepted", a.accepted}});
  json j{{"kind", "harden"}, {"success", res.success}, {"phi_hat", to_json(res.phi_hat)},
         {"padded_from", res.padded_from >= 0 ? json(res.padded_from) : json(nullptr)},
         {"types", types}, {"working_orders", res.working_orders}, {"certificates", certs},
         {"log", log}, {"budget", to_string(res.budget)}, {"distance", to_string(res.distance)},
         {"jet_preserved", res.jet_preserved}};
  if (!res.failure.empty()) j["failure"] = res.failure;
  return j;
}

HardenRequest harden_request_from_json(const json& j) {
  if (!j.is_object()) throw InputError("harden request: expected an object");
  HardenRequest req;
  if (!j.contains("phi")) throw InputError("harden request: missing \"phi\"");
  req.phi = diffeo_from_json<Rational>(j["phi"], RationalRing{}, "harden request.phi");
  req.N0 = detail::int_field(j, "N0", "harden request");
  if (!j.contains("epsilon")) throw InputError("harden request: missing \"epsilon\"");
  req.eps = rational_from_json(j["epsilon"], "harden request.epsilon");
  if (!j.contains("types") || !j["types"].is_array()) throw InputError("harden request: \"types\" must be an array");
  for (std::size_t i = 0; i < j["types"].size(); ++i) {
    const auto& t = j["types"][i];
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer())
      throw InputError("harden request: types #" + std::to_string(i) + " " + t.dump() + ": expected [k, nu]");
    req.types.push_back({t[0].get<int>(), t[1].get<int>()});
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("harden request: \"seed\" must be a non-negative integer");
    req.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("working_orders")) {
    if (!j["working_orders"].is_array()) throw InputError("harden request: \"working_orders\" must be an array");
    for (const auto& w : j["working_orders"]) {
      if (!w.is_number_integer()) throw InputError("harden request: working order " + w.dump() + " is not an integer");
      req.working_orders.push_back(w.get<int>());
    }
  }
  if (j.contains("max_retries")) req.max_retries = detail::int_field(j, "max_retries", "harden request");
  if (j.contains("n1_max")) req.n1_max = detail::int_field(j, "n1_max", "harden request");
  if (j.contains("n1_samples")) req.n1_samples = detail::int_field(j, "n1_samples", "harden request");
  try {
    validate(req);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  return req;
}

}  // namespace jetfol
