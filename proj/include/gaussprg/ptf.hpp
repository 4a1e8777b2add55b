// Functions of k degree-d polynomial threshold functions: k polynomials and a
// 2^k-entry Boolean combiner table indexed by the packed sign vector.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaussprg/poly.hpp"

namespace gaussprg {

struct PtfFunction {
  std::vector<MonomialPoly> polys;  // shared dimension
  std::vector<uint8_t> combiner;    // 2^k entries of 0/1

  uint32_t k() const { return static_cast<uint32_t>(polys.size()); }
  uint32_t dimension() const { return polys.empty() ? 0 : polys.front().dimension(); }

  /// Throws std::invalid_argument when the shape constraints are violated.
  void validate() const;
};

/// 1 iff v >= 0 (inclusive at zero; -0.0 counts as >= 0).
inline int sign_of(double v) { return v >= 0.0 ? 1 : 0; }

/// Packed sign vector: bit i carries sign_of(polys[i](x)).
uint32_t sign_index(const PtfFunction& f, std::span<const double> x);

/// combiner[sign_index(x)].
int eval_F(const PtfFunction& f, std::span<const double> x);

/// Deterministic random test family: Gaussian Hermite coefficients per
/// polynomial (unit L2 norm when normalize is set) and a uniform combiner.
PtfFunction random_family(uint64_t rng_seed, uint32_t n, uint32_t d, uint32_t k, bool normalize);

/// Single random polynomial with Gaussian Hermite coefficients; the building
/// block of random_family, exposed for the statistical suites.
MonomialPoly random_poly(uint64_t rng_seed, uint32_t n, uint32_t d, bool normalize);

/// Intersection of the first k coordinate halfspaces: p_i = x_i, AND combiner.
/// Strongly moment-sensitive, used as the under-independence negative control.
PtfFunction axis_intersection_family(uint32_t n, uint32_t k);

/// Deterministic digest of the family structure (FNV-1a over the canonical
/// term order); identifies a family inside reports.
std::string family_digest(const PtfFunction& f);

}  // namespace gaussprg
