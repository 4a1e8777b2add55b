// Box-Muller transform from unit uniforms to standard Gaussians, plus the
// coupled exact/truncated sample pairs used by the discretization tests.
#pragma once

#include <cstdint>

#include "gaussprg/field.hpp"

namespace gaussprg {

struct UnitPair {
  double u = 1.0;  // strictly positive so log(u) is finite
  double v = 1.0;
};

/// sqrt(-2 ln u) * cos(2 pi v).  Standard Gaussian when (u, v) is uniform on
/// (0, 1]^2.  Throws std::domain_error when u is outside (0, 1].
double box_muller(UnitPair pair);

/// Deterministic M-bit-grid Box-Muller output at coordinate j: the two
/// sources supply the u and v grid values.
double sample_block_coordinate(const KWisePolySource& u_src, const KWisePolySource& v_src,
                               uint64_t j, int precision_bits);

struct CoupledSample {
  double exact_y = 0.0;
  double truncated_x = 0.0;
  double delta_bound = 0.0;
};

/// Default tested closeness bound: 2^(-M/2 + 1).
double default_coupling_delta(int precision_bits);

/// exact_y from the pair as-is; truncated_x from the pair floored to the
/// M-bit grid (u clamped to >= 2^-M so the log stays finite).  delta < 0
/// selects the default bound.
CoupledSample coupled_sample(UnitPair pair, int precision_bits, double delta = -1.0);

}  // namespace gaussprg
