// The bump functions psi and rho and the derivative-control mollifier G:
// a smooth [0,1]-valued indicator of "every gradient order is controlled by
// its predecessor" across all k polynomials of a family.
#pragma once

#include <span>
#include <vector>

#include "gaussprg/ptf.hpp"

namespace gaussprg {

/// exp(1/(x^2 - 1)) for |x| < 1, otherwise 0.
double psi(double x);

/// 1 for x >= 1, 0 for x <= 0, e * exp(1/((x-1)^2 - 1)) between.
double rho(double x);

struct MollifierConfig {
  double eps = 0.1;  // in (0, 1)
  const PtfFunction* family = nullptr;
};

struct MollifierFactor {
  uint32_t poly_index = 0;
  uint32_t t = 0;
  double grad_sq = 0.0;       // ||grad^t p_i(x)||^2
  double grad_next_sq = 0.0;  // ||grad^(t+1) p_i(x)||^2
  double factor = 1.0;
};

/// Per-(i, t) factors of G at x; degenerate norms resolve to 1 when both
/// vanish and to 0 when only the numerator does.
std::vector<MollifierFactor> mollifier_factors(const MollifierConfig& cfg, std::span<const double> x);

/// Product over i <= k, t < d of rho(log(||grad^t p_i||^2 / (16 eps^2 ||grad^(t+1) p_i||^2))).
double mollifier_G(const MollifierConfig& cfg, std::span<const double> x);

struct DerivativeBoundReport {
  int t = 0;
  double max_abs_psi = 0.0;
  double max_abs_rho = 0.0;
  double bound = 0.0;  // t^(6t)
  bool pass = false;
};

/// Central-finite-difference estimate of the t-th derivatives of psi and rho
/// over a 1000-point grid, checked against the t^(6t) envelope.  t in [1, 4];
/// the t = 1 envelope is too small for rho and honestly fails.
DerivativeBoundReport derivative_bound_check(int t);

}  // namespace gaussprg
