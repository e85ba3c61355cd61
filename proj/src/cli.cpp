#include "jetfol/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jetfol/harden.hpp"

namespace jetfol {

namespace {

// ---------------------------------------------------------------------------
// config access

template <class T>
T get_or(const json& c, const char* key, T fallback) {
  if (!c.contains(key) || c[key].is_null()) return fallback;
  try {
    return c[key].get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config: \"") + key + "\" has the wrong type");
  }
}

const json& need(const json& c, const char* key) {
  if (!c.contains(key) || c[key].is_null()) throw InputError(std::string("config: missing \"") + key + "\"");
  return c[key];
}

template <class F>
auto with_ring(const std::string& name, F&& f) {
  if (name == "q") return f(RationalRing{});
  if (name.rfind("fp:", 0) == 0) {
    std::uint32_t p = 0;
    try {
      const long long v = std::stoll(name.substr(3));
      if (v <= 1 || v >= (1LL << 31)) throw InputError("");
      p = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw InputError("ring \"" + name + "\": expected fp:<prime>");
    }
    if (!is_prime(p)) throw InputError("ring \"" + name + "\": " + std::to_string(p) + " is not prime");
    return f(PrimeField(p));
  }
  throw InputError("unknown ring \"" + name + "\" (expected q or fp:<p>)");
}

RankPolicy rank_policy(const json& c) {
  RankPolicy p;
  const auto m = get_or<std::string>(c, "rank_method", "auto");
  if (m == "auto")
    p.method = RankPolicy::Method::automatic;
  else if (m == "exact")
    p.method = RankPolicy::Method::exact;
  else if (m == "modular")
    p.method = RankPolicy::Method::modular;
  else
    throw InputError("rank_method must be auto, exact or modular");
  if (c.contains("primes")) {
    p.primes.clear();
    for (const auto& v : c["primes"]) {
      const auto q = v.get<std::uint32_t>();
      if (!is_prime(q)) throw InputError("primes: " + std::to_string(q) + " is not prime");
      p.primes.push_back(q);
    }
  }
  return p;
}

DecidePolicy decide_policy(const json& c, int jobs) {
  DecidePolicy p;
  p.seed = get_or<std::uint64_t>(c, "seed", 0);
  p.jobs = jobs;
  if (c.contains("policy")) {
    const auto& q = c["policy"];
    p.max_free_params = get_or<int>(q, "max_free_params", p.max_free_params);
    p.enumeration_budget = get_or<std::uint64_t>(q, "enumeration_budget", p.enumeration_budget);
    p.random_samples = get_or<int>(q, "random_samples", p.random_samples);
    p.node_budget = get_or<std::uint64_t>(q, "node_budget", p.node_budget);
  }
  return p;
}

StratumChoice stratum_choice(const std::string& s) {
  if (s == "any") return StratumChoice::any;
  if (s == "radial") return StratumChoice::radial;
  if (s == "non-radial") return StratumChoice::non_radial;
  throw InputError("strata must be any, radial or non-radial");
}

// ---------------------------------------------------------------------------
// commands

CommandOutput cmd_eval_e(const json& c) {
  return with_ring(get_or<std::string>(c, "ring", "q"), [&](const auto& ring) {
    using S = typename std::decay_t<decltype(ring)>::value_type;
    auto phi = diffeo_from_json<S>(need(c, "phi"), ring, "phi");
    auto w1 = oneform_from_json<S>(need(c, "w1"), ring, "w1");
    auto w2 = oneform_from_json<S>(need(c, "w2"), ring, "w2");
    const int order = get_or<int>(c, "order", -1);
    auto r = order >= 0 ? truncated_E(phi, w1, w2, order) : evaluate_E(phi, w1, w2);
    json res = to_json(r);
    res["vanishes"] = r.vanishes();
    return CommandOutput{res, kExitOk};
  });
}

CommandOutput cmd_dims(const json& c) {
  const int k = need(c, "k").get<int>(), nu = need(c, "nu").get<int>(), max = need(c, "max").get<int>();
  if (k < 0 || nu < 0 || max < 0) throw InputError("dims: k, nu and max must be non-negative");
  const long long expected = 4LL * k + 4;
  const int from = std::max(k, nu);
  json table = json::array();
  bool ok = true;
  long long prev = 0;
  for (int M = 0; M <= max; ++M) {
    const long long d = dim_fol_jets(k, nu, M);
    const long long inc = d - prev;
    prev = d;
    table.push_back(json{{"M", M}, {"dim", d}, {"increment", inc}});
    if (M >= from && inc != expected) ok = false;
  }
  return {json{{"kind", "dims"}, {"k", k}, {"nu", nu}, {"table", table}, {"expected_increment", expected},
               {"stable_from", from}, {"increment_check", ok}},
          ok ? kExitOk : kExitFailure};
}

CommandOutput cmd_rank_growth(const json& c, int jobs) {
  return with_ring(get_or<std::string>(c, "ring", "q"), [&](const auto& ring) {
    using S = typename std::decay_t<decltype(ring)>::value_type;
    const int k = need(c, "k").get<int>(), nu = need(c, "nu").get<int>();
    const int n = need(c, "N").get<int>(), n_to = get_or<int>(c, "N_to", n);
    const int samples = get_or<int>(c, "samples", 10);
    const auto seed = get_or<std::uint64_t>(c, "seed", 0);
    const auto choice = stratum_choice(get_or<std::string>(c, "strata", "any"));
    const auto pol = rank_policy(c);
    json reports = json::array();
    bool pass = true;
    for (int N = n; N <= n_to; ++N) {
      auto rep = rank_growth_check<S>(ring, k, nu, N, samples, derive_seed(seed, {static_cast<std::uint64_t>(N)}),
                                      pol, jobs, choice);
      pass = pass && rep.pass;
      reports.push_back(to_json(rep));
    }
    return CommandOutput{json{{"kind", "rank_growth"}, {"pass", pass}, {"reports", reports}},
                         pass ? kExitOk : kExitInconclusive};
  });
}

CommandOutput cmd_estimate_n1(const json& c, int jobs) {
  return with_ring(get_or<std::string>(c, "ring", "q"), [&](const auto& ring) {
    using S = typename std::decay_t<decltype(ring)>::value_type;
    auto rep = estimate_N1<S>(ring, need(c, "k").get<int>(), need(c, "nu").get<int>(), get_or<int>(c, "max_N", 30),
                              get_or<int>(c, "samples", 4), get_or<std::uint64_t>(c, "seed", 0),
                              get_or<int>(c, "N0", 1), rank_policy(c), jobs);
    return CommandOutput{to_json(rep), rep.found ? kExitOk : kExitInconclusive};
  });
}

CommandOutput cmd_decide(const json& c, int jobs) {
  return with_ring(get_or<std::string>(c, "ring", "q"), [&](const auto& ring) {
    using S = typename std::decay_t<decltype(ring)>::value_type;
    auto phi = diffeo_from_json<S>(need(c, "phi"), ring, "phi");
    const int N = need(c, "order").get<int>();
    if (get_or<bool>(c, "pad", false) && phi.order() < N + 1) phi = padded_to(phi, N + 1);
    auto cert = decide_type(phi, need(c, "k").get<int>(), need(c, "nu").get<int>(), N, decide_policy(c, jobs));
    return CommandOutput{to_json(cert), cert.verdict == Verdict::inconclusive ? kExitInconclusive : kExitOk};
  });
}

CommandOutput cmd_oracle(const json& c) {
  const auto name = get_or<std::string>(c, "ring", "q");
  if (name.rfind("fp:", 0) != 0) throw InputError("oracle: needs --ring fp:<p>");
  return with_ring(name, [&](const auto& ring) -> CommandOutput {
    using S = typename std::decay_t<decltype(ring)>::value_type;
    if constexpr (std::is_same_v<S, Fp>) {
      auto phi = diffeo_from_json<Fp>(need(c, "phi"), ring, "phi");
      const int N = need(c, "order").get<int>();
      if (get_or<bool>(c, "pad", false) && phi.order() < N + 1) phi = padded_to(phi, N + 1);
      const int k = need(c, "k").get<int>(), nu = need(c, "nu").get<int>();
      auto r = brute_force_oracle(phi, k, nu, N);
      json res{{"kind", "oracle"}, {"verdict", r.exists ? "foliation_found" : "obstructed"}, {"k", k},
               {"nu", nu}, {"N", N}, {"ring", ring.name()}, {"exact", true}, {"enumerated", r.enumerated}};
      if (r.w1) {
        res["w1"] = to_json(*r.w1);
        res["w2"] = to_json(*r.w2);
      }
      return {res, kExitOk};
    } else {
      throw InputError("oracle: needs a finite field");
    }
  });
}

CommandOutput cmd_harden(const json& c, int jobs) {
  auto req = harden_request_from_json(need(c, "request"));
  req.policy = decide_policy(c, jobs);
  req.policy.seed = req.seed;
  auto res = harden(req);
  json out = to_json(res);
  if (res.success) {
    auto chk = check_harden(req, res);
    out["check"] = json{{"jet_preserved", chk.jet_preserved}, {"within_eps", chk.within_eps},
                        {"all_obstructed", chk.all_obstructed}};
    if (!chk.ok()) return {out, kExitFailure};
  }
  return {out, res.success ? kExitOk : kExitInconclusive};
}

CommandOutput cmd_verify(const json& c, int jobs) {
  const json& cert = need(c, "certificate");
  if (!cert.is_object() || !cert.contains("config") || !cert.contains("result"))
    throw InputError("verify: not a certificate envelope (missing \"config\" or \"result\")");
  const json& cfg = cert["config"];
  if (get_or<std::string>(cfg, "command", "") == "verify") throw InputError("verify: refusing to verify a verify");
  auto replay = run_command(cfg, jobs);
  const bool equal = replay.result == cert["result"];
  json checks = json::object();
  bool ok = equal;
  const auto command = get_or<std::string>(cfg, "command", "");
  const json& res = cert["result"];
  if ((command == "decide" || command == "oracle") && res.contains("w1")) {
    // independent re-evaluation of the witness
    ok = ok && with_ring(get_or<std::string>(cfg, "ring", "q"), [&](const auto& ring) {
      using S = typename std::decay_t<decltype(ring)>::value_type;
      auto phi = diffeo_from_json<S>(cfg["phi"], ring, "phi");
      const int N = res["N"].get<int>();
      if (phi.order() < N + 1) phi = padded_to(phi, N + 1);
      auto w1 = oneform_from_json<S>(res["w1"], ring, "w1");
      auto w2 = oneform_from_json<S>(res["w2"], ring, "w2");
      auto r = evaluate_E(jet(phi, N + 1), w1, w2);
      const bool v = r.valid_order >= N + 2 * w1.nu() && jet(r.f.f, N + 2 * w1.nu()).is_zero();
      checks["witness_vanishes"] = v;
      return v;
    });
  }
  if (command == "harden" && res.contains("check")) {
    const bool v = res["check"]["jet_preserved"].get<bool>() && res["check"]["within_eps"].get<bool>() &&
                   res["check"]["all_obstructed"].get<bool>();
    checks["harden_contract"] = v;
    ok = ok && v;
  }
  return {json{{"kind", "verify"}, {"command", command}, {"replay_equal", equal}, {"checks", checks},
               {"verified", ok}},
          ok ? kExitOk : kExitFailure};
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

json normalized_input(const std::string& path, const std::string& what, const std::string& ring) {
  json j = load_json_file(path);
  // parse once to reject schema errors before running anything
  with_ring(ring, [&](const auto& r) {
    using S = typename std::decay_t<decltype(r)>::value_type;
    if (what == "phi") diffeo_from_json<S>(j, r, path);
    if (what == "form") oneform_from_json<S>(j, r, path);
    return 0;
  });
  return j;
}

}  // namespace

CommandOutput run_command(const json& config, int jobs) {
  const auto command = get_or<std::string>(config, "command", "");
  if (command == "eval-e") return cmd_eval_e(config);
  if (command == "dims") return cmd_dims(config);
  if (command == "rank-growth") return cmd_rank_growth(config, jobs);
  if (command == "estimate-n1") return cmd_estimate_n1(config, jobs);
  if (command == "decide") return cmd_decide(config, jobs);
  if (command == "oracle") return cmd_oracle(config);
  if (command == "harden") return cmd_harden(config, jobs);
  if (command == "verify") return cmd_verify(config, jobs);
  throw InputError("unknown command \"" + command + "\"");
}

json envelope(const json& config, const json& result) {
  return json{{"tool", "jetfol"},      {"version", kToolVersion}, {"rng", kRngName},
              {"generated_at", utc_now()}, {"config", config},       {"result", result}};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jets of foliations on glued neighborhoods: compatibility, ranks, decisions"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::string ring = "q", out_path;
  std::uint64_t seed = 0;
  int jobs = default_jobs();
  app.add_option("--ring", ring, "coefficient ring: q or fp:<p>");
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the certificate here instead of stdout");

  json cfg = json::object();
  std::string phi_path, w1_path, w2_path, request_path, cert_path, strata = "any", rank_method = "auto";
  int k = 0, nu = 0, order = -1, max = 15, N = 1, N_to = -1, samples = 10, max_N = 30, N0 = 1;
  bool pad = false, text = false;
  DecidePolicy dp;

  auto* eval = app.add_subcommand("eval-e", "evaluate E(Phi, w1, w2)");
  eval->add_option("--phi", phi_path)->required();
  eval->add_option("--w1", w1_path)->required();
  eval->add_option("--w2", w2_path)->required();
  eval->add_option("--order", order, "truncate at N: J^{N+2nu} E from J^{N+1} Phi, J^{N+nu} w_i");

  auto* dims = app.add_subcommand("dims", "dimension of foliation jets of type (k, nu)");
  dims->add_option("--k", k)->required();
  dims->add_option("--nu", nu)->required();
  dims->add_option("--max", max, "largest M");
  dims->add_flag("--text", text, "plain-text table");

  auto* rg = app.add_subcommand("rank-growth", "rank of the degree-(N+1) Phi block at sampled Z-points");
  rg->add_option("--k", k)->required();
  rg->add_option("--nu", nu)->required();
  rg->add_option("--N", N)->required();
  rg->add_option("--N-to", N_to, "run N..N-to");
  rg->add_option("--samples", samples);
  rg->add_option("--strata", strata, "any, radial or non-radial");
  rg->add_option("--rank-method", rank_method, "auto, exact or modular");

  auto* en = app.add_subcommand("estimate-n1", "smallest N where the rank bound beats the jet dimension");
  en->add_option("--k", k)->required();
  en->add_option("--nu", nu)->required();
  en->add_option("--max-N", max_N);
  en->add_option("--samples", samples);
  en->add_option("--N0", N0);
  en->add_option("--rank-method", rank_method, "auto, exact or modular");

  auto add_policy = [&](CLI::App* a) {
    a->add_option("--random-samples", dp.random_samples);
    a->add_option("--node-budget", dp.node_budget);
    a->add_option("--max-free-params", dp.max_free_params);
    a->add_option("--enumeration-budget", dp.enumeration_budget);
  };
  auto* dec = app.add_subcommand("decide", "is there a pair of type (k, nu) through the given order?");
  dec->add_option("--phi", phi_path)->required();
  dec->add_option("--k", k)->required();
  dec->add_option("--nu", nu)->required();
  dec->add_option("--order", order, "working order N")->required();
  dec->add_flag("--pad", pad, "zero-pad Phi to order N+1");
  add_policy(dec);

  auto* orc = app.add_subcommand("oracle", "brute-force answer over F_p");
  orc->add_option("--phi", phi_path)->required();
  orc->add_option("--k", k)->required();
  orc->add_option("--nu", nu)->required();
  orc->add_option("--order", order, "working order N")->required();
  orc->add_flag("--pad", pad, "zero-pad Phi to order N+1");

  auto* hd = app.add_subcommand("harden", "perturb Phi above N0 until the listed types are obstructed");
  hd->add_option("--request", request_path)->required();
  add_policy(hd);

  auto* ver = app.add_subcommand("verify", "replay a certificate and re-check it");
  ver->add_option("--cert", cert_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    auto* sub = app.get_subcommands().front();
    with_ring(ring, [](const auto&) { return 0; });
    cfg["command"] = sub->get_name();
    const json policy{{"max_free_params", dp.max_free_params},
                      {"enumeration_budget", dp.enumeration_budget},
                      {"random_samples", dp.random_samples},
                      {"node_budget", dp.node_budget}};
    if (sub == eval) {
      cfg["ring"] = ring;
      cfg["phi"] = normalized_input(phi_path, "phi", ring);
      cfg["w1"] = normalized_input(w1_path, "form", ring);
      cfg["w2"] = normalized_input(w2_path, "form", ring);
      cfg["order"] = order >= 0 ? json(order) : json(nullptr);
    } else if (sub == dims) {
      cfg["k"] = k;
      cfg["nu"] = nu;
      cfg["max"] = max;
    } else if (sub == rg) {
      cfg.update(json{{"ring", ring}, {"k", k}, {"nu", nu}, {"N", N}, {"N_to", N_to >= 0 ? N_to : N},
                      {"samples", samples}, {"strata", strata}, {"rank_method", rank_method}, {"seed", seed}});
    } else if (sub == en) {
      cfg.update(json{{"ring", ring}, {"k", k}, {"nu", nu}, {"max_N", max_N}, {"samples", samples}, {"N0", N0},
                      {"rank_method", rank_method}, {"seed", seed}});
    } else if (sub == dec || sub == orc) {
      cfg.update(json{{"ring", ring}, {"phi", normalized_input(phi_path, "phi", ring)}, {"k", k}, {"nu", nu},
                      {"order", order}, {"pad", pad}, {"seed", seed}});
      if (sub == dec) cfg["policy"] = policy;
    } else if (sub == hd) {
      cfg["request"] = load_json_file(request_path);
      cfg["policy"] = policy;
    } else if (sub == ver) {
      cfg["certificate"] = load_json_file(cert_path);
    }
    auto result = run_command(cfg, jobs);
    if (sub == dims && text) {
      std::ostringstream ss;
      ss << "# k=" << k << " nu=" << nu << " expected increment " << result.result["expected_increment"] << "\n";
      ss << "M\tdim\tincrement\n";
      for (const auto& row : result.result["table"]) ss << row["M"] << "\t" << row["dim"] << "\t" << row["increment"] << "\n";
      out << ss.str();
      return result.status;
    }
    const std::string doc = envelope(cfg, result.result).dump(2) + "\n";
    if (out_path.empty()) {
      out << doc;
    } else {
      std::ofstream f(out_path);
      if (!f) throw InputError(out_path + ": cannot write");
      f << doc;
    }
    return result.status;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace jetfol
