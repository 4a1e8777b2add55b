// Monte Carlo and exhaustive statistical machinery: fooling-gap estimation
// with Hoeffding intervals, exact independence enumeration, coupling and
// anti-concentration tests, and the lemma-validation suites.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaussprg/prg.hpp"
#include "gaussprg/ptf.hpp"

namespace gaussprg {

struct EstimateCI {
  double mean = 0.0;
  uint64_t n_samples = 0;
  double half_width = 0.0;
  double confidence = 0.99;
};

/// Distribution-free Hoeffding half width sqrt(ln(2/(1-confidence)) / (2N)).
double hoeffding_half_width(uint64_t n_samples, double confidence = 0.99);

/// Sample loops run over fixed-size chunks; a factory builds one sequential
/// vector sampler per chunk so results are identical at any thread count.
inline constexpr uint64_t kChunkSize = 4096;
using ChunkSamplerFactory = std::function<std::function<void(std::span<double>)>(uint64_t chunk_index)>;

EstimateCI estimate_mean(const PtfFunction& F, const ChunkSamplerFactory& make_sampler,
                         uint64_t n_samples, double confidence = 0.99);

// ---- documented seed schedules ----

/// PRG-arm draw seeds: splitmix64 stream keyed by fnv1a64(master) and the
/// draw index, expanded to out_bytes.
std::vector<std::byte> expand_arm_seed(std::span<const std::byte> master, uint64_t draw_index,
                                       size_t out_bytes);

/// Gaussian-arm chunk seeds: splitmix64 of fnv1a64(master) xor a fixed tag,
/// advanced by the chunk index.
uint64_t gaussian_chunk_seed(std::span<const std::byte> master, uint64_t chunk_index);

/// One fresh PRG output per draw, seeds from expand_arm_seed.
ChunkSamplerFactory prg_arm_sampler(const PrgParams& params, std::vector<std::byte> master);

/// Reference true-Gaussian draws, one stream per chunk.
ChunkSamplerFactory gaussian_arm_sampler(uint32_t n, std::vector<std::byte> master);

struct GapReport {
  EstimateCI prg_estimate;
  EstimateCI gaussian_estimate;
  double gap = 0.0;        // |prg.mean - gaussian.mean|
  double gap_bound = 0.0;  // sum of half widths
  double target_eps = 0.0;
  PrgParams params;
  std::string family_digest;
  std::string master_seed_hex;
  bool pass = false;  // gap <= target_eps + gap_bound
};

GapReport fooling_gap(const PtfFunction& F, const PrgParams& params, uint64_t n_per_arm,
                      std::span<const std::byte> master_seed);

// ---- exact independence ----

struct IndependenceReport {
  uint64_t field_modulus = 0;
  uint32_t source_wiseness = 0;
  uint32_t tested_wiseness = 0;
  std::vector<uint64_t> indices;
  uint64_t seed_tuples = 0;
  bool pass = false;
  std::string detail;
};

/// Enumerates all p^source_t coefficient tuples and asserts exact joint
/// uniformity of (eval at j)_{j in S} for every subset S of `indices` with
/// |S| <= test_t.  Refuses instances with p^source_t > 10^7.
IndependenceReport exhaustive_independence_test(uint64_t p, uint32_t source_t, uint32_t test_t,
                                                std::vector<uint64_t> indices);

// ---- coupling ----

struct CouplingReport {
  int precision_bits = 0;
  double delta = 0.0;
  uint64_t n_samples = 0;
  double rate = 0.0;       // empirical Pr[|X - Y| <= delta]
  double threshold = 0.0;  // 1 - delta - 3 * binomial SE
  bool pass = false;
};

CouplingReport coupling_test(int precision_bits, double delta, uint64_t n_samples, uint64_t seed);

// ---- anti-concentration ----

struct AntiConcentrationReport {
  uint32_t degree = 0;
  double eps = 0.0;
  double c = 0.0;
  uint32_t dimension = 0;
  uint32_t trials = 0;
  uint64_t n_samples = 0;
  double bound = 0.0;       // c * d * eps^(1/d)
  double worst_rate = 0.0;  // largest empirical Pr[|p(y)| <= eps]
  bool pass = false;        // every trial within bound + 3 SE
};

AntiConcentrationReport anti_concentration_test(uint32_t degree, double eps, uint64_t n_samples,
                                                uint32_t trials, double c, uint32_t dimension = 2,
                                                uint64_t seed = 0x616e7469636f6e63ull);

// ---- lemma suites ----

struct LemmaCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // check-specific; see detail
  std::string detail;
};

struct LemmaSuiteReport {
  std::vector<LemmaCheck> checks;
  bool all_pass = false;
};

inline constexpr uint64_t kDefaultSuiteSeed = 0x6c656d6d61733031ull;

/// Expansion identity, its fault-injection self-test, hypercontractivity,
/// gradient growth, perturbation, the exact R=2 derivative-concentration
/// comparison, and the bump derivative envelopes.
LemmaSuiteReport lemma_suite(uint64_t seed = kDefaultSuiteSeed);

// individual checks (also used by the acceptance suite)

struct ExpansionIdentityResult {
  double max_rel_err = 0.0;
  bool pass = false;
};
/// shift_expansion against direct evaluation on random instances (degree <= 4,
/// n <= 3, lambda in {0, 0.1, 0.5}); `corruption` is added to the constant
/// Hermite coefficient to prove the check can fail.
ExpansionIdentityResult expansion_identity_check(uint64_t seed, uint32_t instances, double tol,
                                                 double corruption = 0.0);

struct HypercontractivityResult {
  double worst_margin = 0.0;  // max of (||f||_4 - allowance); negative is good
  bool pass = false;
};
HypercontractivityResult hypercontractivity_check(uint64_t seed, uint32_t instances, uint64_t n_samples);

struct GradientGrowthResult {
  double rate = 0.0;
  double threshold = 0.0;  // 1 - eps * d^3
  bool pass = false;
};
GradientGrowthResult gradient_growth_check(uint64_t seed, uint32_t degree, double eps, double c,
                                           uint32_t dimension, uint64_t points);

struct PerturbationResult {
  double worst_ratio = 0.0;  // max |p(x)-p(x')| / bound
  bool pass = false;
};
PerturbationResult perturbation_check(uint64_t seed, uint32_t degree, uint32_t dimension,
                                      uint32_t trials, double B, double delta, double c);

struct DerivConcentrationResult {
  double worst_ratio = 0.0;  // max exact LHS^2 / RHS^2
  bool pass = false;
};
/// Lemma-style moment comparison at R = 2, where both sides are exact
/// functions of Hermite coefficients.
DerivConcentrationResult derivative_concentration_r2_check(uint64_t seed, uint32_t instances);

}  // namespace gaussprg
