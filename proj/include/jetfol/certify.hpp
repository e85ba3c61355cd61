#pragma once

// Rank certificates for the jet of E.  Jacobians are assembled column by
// column from dE_phi / dE_omega, ranks are computed exactly over Q (Bareiss) or
// bounded from below modulo primes, and compatible triples (Z-points) are
// produced degree by degree from sampled leading data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetfol/compat.hpp"
#include "jetfol/io.hpp"
#include "jetfol/leading.hpp"
#include "jetfol/linalg.hpp"
#include "jetfol/parallel.hpp"
#include "jetfol/rng.hpp"

namespace jetfol {

/// dim of pairs (J^M w1, J^M w2) of type (k, nu): 4 * sum_{n=nu}^{M} (min(n, k) + 1).
long long dim_fol_jets(int k, int nu, int M);

// ---------------------------------------------------------------------------
// Parameter slots and tangent directions

/// One coordinate of the parameter space: a monomial in a component of Phi
/// (phi_a: first component, phi_b: second) or of one of the forms.
struct ParamSlot {
  enum class Kind { phi_a, phi_b, w1_P, w1_Q, w2_P, w2_Q };
  Kind kind;
  int i;
  int j;

  int degree() const { return i + j; }
  bool is_phi() const { return kind == Kind::phi_a || kind == Kind::phi_b; }
  std::string label() const;
};

/// (x^i y^j, 0) for all i + j = degree, then (0, x^i y^j).
std::vector<ParamSlot> phi_slots(int degree);
/// Chart-bounded monomials of the given degree in P then Q of form `which`.
std::vector<ParamSlot> form_slots(int which, int k, int degree);

template <class S>
struct Direction {
  std::string label;
  std::optional<HomVectorField<S>> field;  ///< set for a Phi direction
  int slot = 0;                            ///< 1 or 2 for a form direction
  std::optional<RawForm<S>> form;
};

template <class S>
Direction<S> unit_direction(const ParamSlot& s, const ring_t<S>& ring, int order) {
  const S one = ring.one();
  auto mono = BiSeries<S>::monomial(ring, order, s.i, s.j, one);
  auto zero = BiSeries<S>(ring, order);
  Direction<S> d;
  d.label = s.label();
  switch (s.kind) {
    case ParamSlot::Kind::phi_a: d.field.emplace(s.degree(), mono, zero); break;
    case ParamSlot::Kind::phi_b: d.field.emplace(s.degree(), zero, mono); break;
    case ParamSlot::Kind::w1_P: d.slot = 1; d.form = RawForm<S>{mono, zero}; break;
    case ParamSlot::Kind::w1_Q: d.slot = 1; d.form = RawForm<S>{zero, mono}; break;
    case ParamSlot::Kind::w2_P: d.slot = 2; d.form = RawForm<S>{mono, zero}; break;
    case ParamSlot::Kind::w2_Q: d.slot = 2; d.form = RawForm<S>{zero, mono}; break;
  }
  return d;
}

/// (x H, y H) for H = x^i y^{N-i}: the radial directions of degree N + 1.
template <class S>
std::vector<Direction<S>> radial_directions(int N, const ring_t<S>& ring, int order) {
  if (N < 1) throw DomainError("radial directions need N >= 1");
  std::vector<Direction<S>> out;
  for (int i = 0; i <= N; ++i) {
    Direction<S> d;
    d.label = "R[" + std::to_string(i) + "]";
    d.field.emplace(N + 1, BiSeries<S>::monomial(ring, order, i + 1, N - i, ring.one()),
                    BiSeries<S>::monomial(ring, order, i, N - i + 1, ring.one()));
    out.push_back(std::move(d));
  }
  return out;
}

/// (x^i y^{N+1-i}, 0): directions of degree N + 1 along the first component.
template <class S>
std::vector<Direction<S>> line_directions(int N, const ring_t<S>& ring, int order) {
  if (N < 1) throw DomainError("line directions need N >= 1");
  std::vector<Direction<S>> out;
  for (int i = 0; i <= N + 1; ++i) {
    Direction<S> d;
    d.label = "L[" + std::to_string(i) + "]";
    d.field.emplace(N + 1, BiSeries<S>::monomial(ring, order, i, N + 1 - i, ring.one()),
                    BiSeries<S>(ring, order));
    out.push_back(std::move(d));
  }
  return out;
}

/// Column c = J^M of the derivative of E along dirs[c], coefficients in
/// (degree, i) order.  Throws if a column is not determined through degree M.
template <class S>
Matrix<S> build_jacobian(const DiffeoJet<S>& phi, const OneFormJet<S>& w1, const OneFormJet<S>& w2, int M,
                         const std::vector<Direction<S>>& dirs, int jobs = 1) {
  Matrix<S> A(phi.ring(), mono_count(M), dirs.size());
  std::vector<std::vector<S>> cols(dirs.size());
  parallel_for(dirs.size(), jobs, [&](std::size_t c) {
    const auto& d = dirs[c];
    if (!d.field && !d.form) throw DomainError("empty direction " + d.label);
    const Residual<S> r =
        d.field ? dE_phi(phi, w1, w2, *d.field).derivative : dE_omega(phi, w1, w2, d.slot, *d.form);
    if (r.valid_order < M)
      throw DomainError("derivative along " + d.label + " known only through degree " +
                        std::to_string(r.valid_order) + ", need " + std::to_string(M));
    cols[c] = r.f.f.dense(M);
  });
  for (std::size_t c = 0; c < cols.size(); ++c) A.set_column(c, cols[c]);
  return A;
}

/// Rows of the monomials of exactly degree d.
template <class S>
Matrix<S> degree_rows(const Matrix<S>& A, int d) {
  return A.row_block(mono_count(d - 1), mono_count(d));
}

// ---------------------------------------------------------------------------
// Ranks

struct RankPolicy {
  enum class Method { automatic, exact, modular };
  Method method = Method::automatic;
  std::vector<std::uint32_t> primes{std::begin(kDefaultPrimes), std::end(kDefaultPrimes)};
  std::size_t exact_cell_limit = 20000;  ///< automatic: Bareiss up to rows * cols cells
};

struct RankReport {
  std::size_t rank = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// true when `rank` is the exact rank over the ring; otherwise it is a
  /// certified lower bound (a rank modulo p never exceeds the rank over Q).
  bool exact = false;
  std::string method;
  std::vector<std::pair<std::uint32_t, std::optional<std::size_t>>> modular;
  bool consensus = true;  ///< all defined modular ranks agree
};

RankReport certified_rank(const Matrix<Rational>& A, const RankPolicy& policy = {});
RankReport certified_rank(const Matrix<Fp>& A, const RankPolicy& policy = {});

json to_json(const RankReport& r);

// ---------------------------------------------------------------------------
// Z-points

/// Builds compatible triples (Phi, w1, w2) with J^{N+2nu} E = 0 one degree of N
/// at a time.  Leading data are drawn from a stratum; at each step the new
/// coefficients Phi^{N+2} and w_i^{N+1+nu} solve the linear equation for the
/// degree N+1+2nu part of E and a random point of the solution set is taken.
template <class S>
class ZPointSampler {
 public:
  using Ring = ring_t<S>;

  ZPointSampler(Ring ring, LeadingStratum stratum, std::uint64_t seed)
      : ring_(std::move(ring)), stratum_(std::move(stratum)), rng_(seed),
        phi_(DiffeoJet<S>::identity(ring_, 1)),
        lead1_(RawForm<S>::zero(ring_, 0)),
        lead2_(lead1_),
        w1_(lead1_),
        w2_(lead1_) {
    auto [a, b] = sample_stratum<S>(stratum_, ring_, stratum_.nu, [&] { return draw_scalar(rng_, ring_); });
    lead1_ = a;
    lead2_ = b;
    w1_ = a;
    w2_ = b;
    radial_ = is_radial(a);
  }

  int N() const { return N_; }
  int k() const { return stratum_.k; }
  int nu() const { return stratum_.nu; }
  bool radial() const { return radial_; }
  const LeadingStratum& stratum() const { return stratum_; }
  const DiffeoJet<S>& phi() const { return phi_; }
  OneFormJet<S> w1() const { return OneFormJet<S>(1, w1_, k(), nu()); }
  OneFormJet<S> w2() const { return OneFormJet<S>(2, w2_, k(), nu()); }

  /// Adds one degree; throws DomainError if the degree equation has no solution.
  void extend() {
    const int nu = stratum_.nu;
    const int n = N_ + 2, m = N_ + 1 + nu, D = N_ + 1 + 2 * nu;
    const auto L1 = padded_to(lead1_, D + 1), L2 = padded_to(lead2_, D + 1);
    auto coeffs = [&](const BiSeries<S>& f) {
      std::vector<S> v;
      for (int i = 0; i <= D; ++i) v.push_back(f.coeff(i, D - i));
      return v;
    };
    std::vector<ParamSlot> slots = phi_slots(n);
    for (int which : {1, 2})
      for (const auto& s : form_slots(which, stratum_.k, m)) slots.push_back(s);
    Matrix<S> A(ring_, D + 1, slots.size());
    for (std::size_t c = 0; c < slots.size(); ++c) {
      auto d = unit_direction<S>(slots[c], ring_, D + 1);
      BiSeries<S> f(ring_, D);
      if (d.field)
        f = wedge(lie_derivative(*d.field, L1), L2).f;
      else if (d.slot == 1)
        f = wedge(*d.form, L2).f;
      else
        f = wedge(L1, *d.form).f;
      A.set_column(c, coeffs(f));
    }
    auto r = residual_raw(padded_to(phi_, n), padded_to(w1_, m), padded_to(w2_, m));
    if (r.valid_order < D) throw DomainError("Z-point step: residual undetermined at degree " + std::to_string(D));
    auto b = coeffs(r.f.f);
    for (auto& v : b) v = -v;
    auto sol = solve_affine(A, b);
    if (!sol.consistent)
      throw DomainError("Z-point step: no extension at degree " + std::to_string(D) + " for stratum " +
                        stratum_.label());
    auto z = sol.particular;
    for (const auto& kv : sol.kernel) {
      const S t = draw_scalar(rng_, ring_);
      if (is_zero(t)) continue;
      for (std::size_t c = 0; c < z.size(); ++c) z[c] += t * kv[c];
    }
    auto a = phi_.phi_perturbation().padded_to(n), bb = phi_.psi_perturbation().padded_to(n);
    auto P1 = w1_.P.padded_to(m), Q1 = w1_.Q.padded_to(m), P2 = w2_.P.padded_to(m), Q2 = w2_.Q.padded_to(m);
    for (std::size_t c = 0; c < slots.size(); ++c) {
      if (is_zero(z[c])) continue;
      const auto& s = slots[c];
      auto term = BiSeries<S>::monomial(ring_, s.is_phi() ? n : m, s.i, s.j, z[c]);
      switch (s.kind) {
        case ParamSlot::Kind::phi_a: a = a + term; break;
        case ParamSlot::Kind::phi_b: bb = bb + term; break;
        case ParamSlot::Kind::w1_P: P1 = P1 + term; break;
        case ParamSlot::Kind::w1_Q: Q1 = Q1 + term; break;
        case ParamSlot::Kind::w2_P: P2 = P2 + term; break;
        case ParamSlot::Kind::w2_Q: Q2 = Q2 + term; break;
      }
    }
    phi_ = DiffeoJet<S>::from_perturbation(a, bb);
    w1_ = {P1, Q1};
    w2_ = {P2, Q2};
    ++N_;
  }

  void extend_to(int N) {
    while (N_ < N) extend();
  }

  /// J^{N+2nu} E(Phi, w1, w2) == 0, recomputed from scratch.
  bool verify() const { return truncated_E(phi_, w1(), w2(), N_).vanishes(); }

 private:
  Ring ring_;
  LeadingStratum stratum_;
  Rng rng_;
  DiffeoJet<S> phi_;
  RawForm<S> lead1_, lead2_, w1_, w2_;
  bool radial_ = false;
  int N_ = 0;
};

enum class StratumChoice { any, radial, non_radial };

/// Strata eligible for the choice (the radial stratum needs k, nu >= 1).
std::vector<LeadingStratum> eligible_strata(int k, int nu, StratumChoice choice);

/// A Z-point at level N from the sample-th eligible stratum (round robin);
/// retries with fresh sub-seeds if a step has no solution or the sampled
/// leading data fall outside the requested class.
template <class S>
ZPointSampler<S> sample_z_point(const ring_t<S>& ring, int k, int nu, int N, std::uint64_t seed, std::size_t sample,
                                StratumChoice choice = StratumChoice::any) {
  auto strata = eligible_strata(k, nu, choice);
  if (strata.empty()) throw DomainError("no leading strata of the requested kind for type (" + std::to_string(k) +
                                        ", " + std::to_string(nu) + ")");
  const auto& s = strata[sample % strata.size()];
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    ZPointSampler<S> z(ring, s, derive_seed(seed, {sample, attempt}));
    if (choice == StratumChoice::non_radial && z.radial()) continue;
    try {
      z.extend_to(N);
    } catch (const DomainError&) {
      continue;
    }
    return z;
  }
  throw DomainError("could not build a Z-point in stratum " + s.label());
}

// ---------------------------------------------------------------------------
// Rank growth at Z-points

struct RankGrowthSample {
  std::size_t index = 0;
  std::string stratum;
  bool radial = false;
  bool z_verified = false;
  RankReport R;  ///< restricted to the radial directions (x H, y H)
  RankReport L;  ///< restricted to the directions (x^i y^{N+1-i}, 0)
  std::size_t kernel_R = 0;  ///< upper bound on dim ker on R
  bool pass = false;
};

struct RankGrowthReport {
  int k = 0, nu = 0, N = 0;
  std::string ring;
  std::uint64_t seed = 0;
  std::vector<RankGrowthSample> samples;
  bool pass = false;
};

json to_json(const RankGrowthSample& s);
json to_json(const RankGrowthReport& r);

template <class S>
RankReport block_rank(const Matrix<S>& A, const RankPolicy& policy) {
  return certified_rank(A, policy);
}

/// At each sampled Z-point of level N: the degree-(N+2nu) rows of the Jacobian
/// along R and along L.  Radial leading data pass when rank_L = N + 2, the
/// others when dim ker on R <= 1.
template <class S>
RankGrowthReport rank_growth_check(const ring_t<S>& ring, int k, int nu, int N, int samples, std::uint64_t seed,
                                   const RankPolicy& policy = {}, int jobs = 1,
                                   StratumChoice choice = StratumChoice::any) {
  if (N < 1) throw DomainError("rank growth needs N >= 1");
  RankGrowthReport rep;
  rep.k = k;
  rep.nu = nu;
  rep.N = N;
  rep.ring = ring.name();
  rep.seed = seed;
  rep.samples.resize(static_cast<std::size_t>(samples));
  parallel_for(rep.samples.size(), jobs, [&](std::size_t s) {
    auto z = sample_z_point<S>(ring, k, nu, N, seed, s, choice);
    auto& out = rep.samples[s];
    out.index = s;
    out.stratum = z.stratum().label();
    out.radial = z.radial();
    out.z_verified = z.verify();
    const int M = N + 2 * nu;
    const int order = z.phi().order();
    auto w1 = z.w1(), w2 = z.w2();
    auto JR = build_jacobian(z.phi(), w1, w2, M, radial_directions<S>(N, ring, order));
    auto JL = build_jacobian(z.phi(), w1, w2, M, line_directions<S>(N, ring, order));
    out.R = block_rank(degree_rows(JR, M), policy);
    out.L = block_rank(degree_rows(JL, M), policy);
    out.kernel_R = out.R.cols - out.R.rank;
    if (out.radial)
      out.pass = out.L.rank == static_cast<std::size_t>(N + 2) && out.L.exact;
    else
      out.pass = out.kernel_R <= 1;
    out.pass = out.pass && out.z_verified;
  });
  rep.pass = !rep.samples.empty();
  for (const auto& s : rep.samples) rep.pass = rep.pass && s.pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Estimating N1

struct N1Sample {
  std::size_t index = 0;
  std::string stratum;
  bool z_verified = false;
  std::vector<std::size_t> block_ranks;  ///< rank F_m for m = N0 .. max_N
  std::vector<bool> block_exact;
};

struct N1Report {
  int k = 0, nu = 0, N0 = 1, max_N = 0;
  std::string ring;
  std::uint64_t seed = 0;
  bool found = false;
  int N1 = -1;
  std::vector<long long> dims;               ///< dim_fol_jets(k, nu, N + nu), N = N0 .. max_N
  std::vector<std::size_t> min_rank_bound;   ///< min over samples of sum_{m <= N} rank F_m
  std::vector<N1Sample> samples;
};

json to_json(const N1Report& r);

/// Smallest N in [N0, max_N] with sum_{m=N0}^{N} rank F_m > dim_fol_jets(k, nu, N + nu)
/// at every sampled Z-point, where F_m is the block of the Jacobian of
/// J^{m+2nu} E in the Phi^{m+1} coordinates, degree-(m+2nu) rows.  The
/// Jacobian of J^{N+2nu} E in the band (N0, N+1] of Phi is block triangular
/// with these diagonal blocks, so the sum bounds its rank from below.
template <class S>
N1Report estimate_N1(const ring_t<S>& ring, int k, int nu, int max_N, int samples, std::uint64_t seed, int N0 = 1,
                     const RankPolicy& policy = {}, int jobs = 1) {
  if (N0 < 1) throw DomainError("estimate_N1: N0 must be >= 1");
  if (max_N < N0) throw DomainError("estimate_N1: max_N below N0");
  N1Report rep;
  rep.k = k;
  rep.nu = nu;
  rep.N0 = N0;
  rep.max_N = max_N;
  rep.ring = ring.name();
  rep.seed = seed;
  for (int N = N0; N <= max_N; ++N) rep.dims.push_back(dim_fol_jets(k, nu, N + nu));
  rep.samples.resize(static_cast<std::size_t>(samples));
  std::vector<std::optional<ZPointSampler<S>>> points(rep.samples.size());
  std::vector<std::size_t> sums(rep.samples.size(), 0);
  parallel_for(points.size(), jobs, [&](std::size_t s) {
    points[s].emplace(sample_z_point<S>(ring, k, nu, N0, seed, s));
    rep.samples[s].index = s;
    rep.samples[s].stratum = points[s]->stratum().label();
    rep.samples[s].z_verified = true;
  });
  for (int m = N0; m <= max_N && !rep.found; ++m) {
    parallel_for(points.size(), jobs, [&](std::size_t s) {
      auto& z = *points[s];
      auto& out = rep.samples[s];
      z.extend_to(m);
      out.z_verified = out.z_verified && z.verify();
      const int M = m + 2 * nu;
      std::vector<Direction<S>> dirs;
      for (const auto& slot : phi_slots(m + 1)) dirs.push_back(unit_direction<S>(slot, ring, m + 1));
      auto J = build_jacobian(z.phi(), z.w1(), z.w2(), M, dirs);
      auto r = block_rank(degree_rows(J, M), policy);
      out.block_ranks.push_back(r.rank);
      out.block_exact.push_back(r.exact);
      sums[s] += r.rank;
    });
    std::size_t lo = SIZE_MAX;
    bool verified = true;
    for (std::size_t s = 0; s < sums.size(); ++s) {
      lo = std::min(lo, sums[s]);
      verified = verified && rep.samples[s].z_verified;
    }
    rep.min_rank_bound.push_back(lo);
    if (verified && !sums.empty() && static_cast<long long>(lo) > rep.dims[static_cast<std::size_t>(m - N0)]) {
      rep.found = true;
      rep.N1 = m;
    }
  }
  return rep;
}

}  // namespace jetfol
