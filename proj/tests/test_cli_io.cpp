#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jetfol/cli.hpp"
#include "jetfol/harden.hpp"
#include "test_support.hpp"

using namespace jetfol;
using namespace testdata;

namespace {

const std::string kFix = JETFOL_FIXTURES;

struct Run {
  int code = 0;
  std::string out, err;
  json doc() const { return parse_json_text(out, "stdout"); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jetfol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::string fx(const std::string& name) { return kFix + "/" + name; }

std::string temp_path(const std::string& name) {
  return std::string(JETFOL_BINARY_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("io: series and jets roundtrip") {
  std::mt19937_64 g(1);
  for (int i = 0; i < 20; ++i) {
    auto phi = random_diffeo(g, 5);
    CHECK(diffeo_from_json<Rational>(to_json(phi), kQ) == phi);
    auto text = to_json(phi).dump();
    CHECK(diffeo_from_json<Rational>(parse_json_text(text, "mem"), kQ) == phi);
  }
  PrimeField F(32003);
  auto f = perturb_band(DiffeoJet<Fp>::identity(F, 4), DegreeBand(1, 4), Rational(1), 3);
  CHECK(diffeo_from_json<Fp>(to_json(f), F) == f);
  OneFormJet<Rational> w(2, {Q::monomial(kQ, 3, 1, 0, rat(-2, 3)), Q::constant(kQ, 3, Rational(1))}, 1, 0);
  auto back = oneform_from_json<Rational>(to_json(w), kQ);
  CHECK(back.chart() == 2);
  CHECK(back.form() == w.form());
  CHECK(rational_from_json(json("6/4"), "x") == rat(3, 2));
  CHECK(rational_from_json(json(-7), "x") == Rational(-7));
  CHECK_THROWS_AS(rational_from_json(json("1/0"), "x"), InputError);
  CHECK_THROWS_AS(fp_from_json(json{{"mod", 7}, {"val", 1}}, F, "x"), InputError);
}

TEST_CASE("io: errors carry location") {
  try {
    load_json_file(fx("malformed.json"));
    FAIL("no error");
  } catch (const InputError& e) {
    const std::string m = e.what();
    CHECK(m.find("malformed.json:3:") != std::string::npos);
  }
  try {
    oneform_from_json<Rational>(load_json_file(fx("bad_term.json")), kQ, "bad_term.json");
    FAIL("no error");
  } catch (const InputError& e) {
    const std::string m = e.what();
    CHECK(m.find("term #1") != std::string::npos);
    CHECK(m.find("degree 4 exceeds order 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_json_file(fx("does_not_exist.json")), InputError);
  // duplicate terms
  CHECK_THROWS_AS(series_from_json<Rational>(parse_json_text(R"({"order":2,"terms":[[1,0,"1"],[1,0,"2"]]})", "m"), kQ),
                  InputError);
}

TEST_CASE("eval-e on the small examples") {
  auto r = cli({"eval-e", "--phi", fx("phi_identity.json"), "--w1", fx("w1_dx.json"), "--w2", fx("w2_dx.json")});
  REQUIRE(r.code == 0);
  auto d = r.doc();
  CHECK(d["tool"] == "jetfol");
  CHECK(d["result"]["vanishes"] == true);

  r = cli({"eval-e", "--phi", fx("phi_identity.json"), "--w1", fx("w1_dx.json"), "--w2", fx("w2_dy.json")});
  CHECK(r.doc()["result"]["vanishes"] == false);
  CHECK(r.doc()["result"]["terms"] == json::parse(R"([[0,0,"1"]])"));

  // shear: Phi^* dy ^ dy = 2x dx^dy
  r = cli({"eval-e", "--phi", fx("phi_shear.json"), "--w1", fx("w1_dy.json"), "--w2", fx("w2_dy.json")});
  CHECK(r.doc()["result"]["terms"] == json::parse(R"([[1,0,"2"]])"));

  r = cli({"--ring", "fp:32003", "eval-e", "--phi", fx("phi_shear.json"), "--w1", fx("w1_dy.json"), "--w2",
           fx("w2_dy.json")});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["result"]["terms"][0][2]["val"] == 2);

  // radial pair of type (1, 1) through the identity
  r = cli({"eval-e", "--phi", fx("phi_identity.json"), "--w1", fx("w1_radial.json"), "--w2", fx("w2_radial.json"),
           "--order", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["result"]["vanishes"] == true);
  CHECK(r.doc()["result"]["valid_order"] == 3);
}

TEST_CASE("input errors exit with 3") {
  auto r = cli({"eval-e", "--phi", fx("phi_identity.json"), "--w1", fx("malformed.json"), "--w2", fx("w2_dx.json")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("malformed.json:3:") != std::string::npos);
  r = cli({"eval-e", "--phi", fx("phi_identity.json"), "--w1", fx("bad_term.json"), "--w2", fx("w2_dx.json")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("exceeds order") != std::string::npos);
  CHECK(cli({"--ring", "fp:9", "dims", "--k", "0", "--nu", "0"}).code == kExitInput);
  CHECK(cli({"--ring", "z", "dims", "--k", "0", "--nu", "0"}).code == kExitInput);
  CHECK(cli({"dims", "--k", "-1", "--nu", "0"}).code == kExitInput);
  CHECK(cli({"frobnicate"}).code == kExitInput);
  CHECK(cli({}).code == kExitInput);
}

TEST_CASE("dims") {
  auto r = cli({"dims", "--k", "1", "--nu", "1", "--max", "10"});
  REQUIRE(r.code == 0);
  auto res = r.doc()["result"];
  CHECK(res["expected_increment"] == 8);
  CHECK(res["increment_check"] == true);
  CHECK(res["table"][10]["dim"] == 80);
  auto t = cli({"dims", "--k", "0", "--nu", "2", "--max", "4", "--text"});
  CHECK(t.code == 0);
  CHECK(t.out.find("M\tdim\tincrement") != std::string::npos);
}

TEST_CASE("decide and oracle agree on the regression jet") {
  auto d = cli({"--ring", "fp:3", "decide", "--phi", fx("phi_f3_regression.json"), "--k", "0", "--nu", "0",
                "--order", "2"});
  auto o = cli({"--ring", "fp:3", "oracle", "--phi", fx("phi_f3_regression.json"), "--k", "0", "--nu", "0",
                "--order", "2"});
  REQUIRE(d.code == 0);
  REQUIRE(o.code == 0);
  const bool found = d.doc()["result"]["verdict"] == "foliation_found";
  CHECK((o.doc()["result"]["verdict"] == "foliation_found") == found);
  auto id = cli({"decide", "--phi", fx("phi_identity.json"), "--k", "1", "--nu", "0", "--order", "3"});
  REQUIRE(id.code == 0);
  CHECK(id.doc()["result"]["verdict"] == "foliation_found");
  CHECK(id.doc()["result"].contains("w1"));
}

TEST_CASE("oracle: guard and ring restriction") {
  auto g = cli({"--ring", "fp:3", "oracle", "--phi", fx("phi_identity.json"), "--k", "0", "--nu", "1", "--order",
                "8", "--pad"});
  CHECK(g.code == kExitGuard);
  auto q = cli({"oracle", "--phi", fx("phi_identity.json"), "--k", "0", "--nu", "1", "--order", "2"});
  CHECK(q.code == kExitInput);
}

TEST_CASE("certificates replay through verify") {
  const auto cert = temp_path("cli_decide_cert.json");
  auto d = cli({"--out", cert, "decide", "--phi", fx("phi_shear.json"), "--k", "0", "--nu", "0", "--order", "3",
                "--pad"});
  REQUIRE(d.code == 0);
  CHECK(d.out.empty());
  auto v = cli({"verify", "--cert", cert});
  CHECK(v.code == 0);
  CHECK(v.doc()["result"]["replay_equal"] == true);

  // a tampered result is caught
  auto doc = load_json_file(cert);
  doc["result"]["verdict"] = "obstructed";
  const auto bad = temp_path("cli_decide_cert_bad.json");
  std::ofstream(bad) << doc.dump(2);
  auto vb = cli({"verify", "--cert", bad});
  CHECK(vb.code == kExitFailure);
  CHECK(vb.doc()["result"]["replay_equal"] == false);

  const auto hc = temp_path("cli_harden_cert.json");
  auto h = cli({"--out", hc, "harden", "--request", fx("harden_request.json")});
  REQUIRE(h.code == 0);
  auto hv = cli({"verify", "--cert", hc});
  CHECK(hv.code == 0);
  std::remove(cert.c_str());
  std::remove(bad.c_str());
  std::remove(hc.c_str());
}

TEST_CASE("results do not depend on jobs") {
  auto a = cli({"--seed", "4", "rank-growth", "--k", "0", "--nu", "1", "--N", "2", "--N-to", "3", "--samples", "3"});
  auto b = cli({"--seed", "4", "--jobs", "3", "rank-growth", "--k", "0", "--nu", "1", "--N", "2", "--N-to", "3",
                "--samples", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.doc()["result"] == b.doc()["result"]);
  CHECK(a.doc()["config"] == b.doc()["config"]);
}

TEST_CASE("estimate-n1 via the command layer") {
  json cfg{{"command", "estimate-n1"}, {"ring", "q"}, {"k", 0}, {"nu", 1}, {"max_N", 30}, {"samples", 2},
           {"N0", 1}, {"rank_method", "auto"}, {"seed", 2}};
  auto r = run_command(cfg, 1);
  CHECK(r.status == kExitOk);
  CHECK(r.result["found"] == true);
  CHECK(r.result["N1"].get<int>() <= 30);
  cfg["command"] = "nope";
  CHECK_THROWS_AS(run_command(cfg, 1), InputError);
}
