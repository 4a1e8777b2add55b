// The generator: L discretized 2dR-wise independent Gaussian blocks combined
// as x = (1/sqrt(L)) * sum_i X_i, with parameter derivation from (k, d, eps, n)
// and exact seed-length accounting.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gaussprg/field.hpp"

namespace gaussprg {

struct PrgOverrides {
  std::optional<uint64_t> R;
  std::optional<uint64_t> L;
  std::optional<uint32_t> M;
  std::optional<uint64_t> wiseness;       // defaults to 2*d*R
  std::optional<uint64_t> field_modulus;  // explicit prime >= 2^M instead of the margin search
  double C = 2.0;                         // R = ceil(C * log2(k d / eps))
  double C_L = 1.0;                       // L = ceil(C_L * k^4 d^9 / eps^2 * log2(kd/eps)^3)
  double C_M = 1.0;                       // M = ceil(C_M * k d * log2(k d n / eps))
  uint32_t bias_margin = 32;              // field modulus >= 2^(M + bias_margin)
};

struct PrgParams {
  uint32_t n = 1;
  uint32_t k = 1;
  uint32_t d = 1;
  double eps = 0.1;
  uint64_t R = 1;
  uint64_t L = 1;
  uint32_t M = 2;
  uint64_t wiseness = 2;  // 2dR unless overridden
  double C = 2.0, C_L = 1.0, C_M = 1.0;
  uint32_t bias_margin = 32;
  uint64_t field_modulus = 0;  // 0 when too large to materialize (accounting only)
  int field_bit_width = 0;
  std::vector<std::string> overridden;  // names of fields set by overrides

  PrimeField field() const;  // throws when the modulus is accounting-only
};

/// Fills R, L, M, wiseness from the formulas unless overridden, clamps M to
/// the minimum grid size, and picks the smallest prime >= 2^(M + bias_margin)
/// when it fits in 64 bits (otherwise only the bit width is recorded).
PrgParams derive_params(uint32_t k, uint32_t d, double eps, uint32_t n,
                        const PrgOverrides& overrides = {});

/// Exact seed consumption: L blocks * 2 sources * wiseness coefficients
/// * field bit width.
uint64_t seed_length_bits(const PrgParams& params);

struct PrgOutput {
  std::vector<double> x;
  PrgParams params;
  std::string seed_digest;
};

/// Fully deterministic generation.  Block i derives its u and v sources with
/// stream ids 2i and 2i+1; blocks are accumulated in fixed order, so the
/// result is byte-identical at any thread count.  Throws when the seed is
/// shorter than seed_length_bits(params).
PrgOutput generate(const PrgParams& params, std::span<const std::byte> seed);

/// Baseline true-Gaussian stream from a documented deterministic RNG
/// (mt19937_64 plus the same Box-Muller map as the generator).
class ReferenceGaussianStream {
 public:
  ReferenceGaussianStream(uint32_t n, uint64_t rng_seed) : n_(n), eng_(rng_seed) {}

  double next();
  void next_vector(std::span<double> out);
  uint32_t dimension() const { return n_; }

 private:
  uint32_t n_;
  std::mt19937_64 eng_;
};

/// `count` baseline vectors, materialized.
std::vector<std::vector<double>> generate_reference(uint32_t n, uint64_t rng_seed, uint64_t count);

}  // namespace gaussprg
