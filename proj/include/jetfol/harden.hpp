#pragma once

// Perturbing Phi above order N0 by less than eps until a finite list of types
// is obstructed.  Types are grouped into stages by working order; stage n
// perturbs the band (N0, N_n + 1] by coefficients below eps / 2^n and re-decides
// every type secured so far.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetfol/prolong.hpp"

namespace jetfol {

struct FoliationType {
  int k = 0;
  int nu = 0;
  friend bool operator==(const FoliationType&, const FoliationType&) = default;
};

struct HardenRequest {
  DiffeoJet<Rational> phi = DiffeoJet<Rational>::identity(RationalRing{}, 1);
  int N0 = 1;
  Rational eps = 1;
  std::vector<FoliationType> types;
  std::uint64_t seed = 0;
  std::vector<int> working_orders;  ///< per type; empty: estimate_N1 + 2
  int max_retries = 32;
  int n1_max = 30;      ///< search limit when estimating working orders
  int n1_samples = 4;
  DecidePolicy policy;
};

struct HardenAttempt {
  int stage = 0;
  int retry = 0;
  int band_lo = 0;  ///< exclusive
  int band_hi = 0;  ///< inclusive
  Rational bound;
  std::uint64_t seed = 0;
  std::vector<std::string> verdicts;  ///< one per type checked, in type order
  bool accepted = false;
};

struct HardenResult {
  bool success = false;
  DiffeoJet<Rational> phi_hat = DiffeoJet<Rational>::identity(RationalRing{}, 1);
  int padded_from = -1;  ///< order of the input when it was zero-padded
  std::vector<FoliationType> types;
  std::vector<int> working_orders;
  std::vector<Certificate<Rational>> certificates;  ///< final re-run, one per type
  std::vector<HardenAttempt> log;
  Rational budget;    ///< sum of the stage bounds actually used
  Rational distance;  ///< sup_norm(phi_hat - phi)
  bool jet_preserved = false;
  std::string failure;
};

HardenResult harden(const HardenRequest& req);

/// Independent re-check of the three contract properties.
struct HardenCheck {
  bool jet_preserved = false;
  bool within_eps = false;
  bool all_obstructed = false;
  bool ok() const { return jet_preserved && within_eps && all_obstructed; }
};
HardenCheck check_harden(const HardenRequest& req, const HardenResult& res);

json to_json(const HardenRequest& req);
json to_json(const HardenResult& res);
HardenRequest harden_request_from_json(const json& j);

}  // namespace jetfol
