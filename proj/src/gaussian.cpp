#include "gaussprg/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaussprg {

double box_muller(UnitPair pair) {
  if (!(pair.u > 0.0) || pair.u > 1.0) {
    throw std::domain_error("box_muller: u must lie in (0, 1]");
  }
  return std::sqrt(-2.0 * std::log(pair.u)) * std::cos(2.0 * std::numbers::pi * pair.v);
}

double sample_block_coordinate(const KWisePolySource& u_src, const KWisePolySource& v_src,
                               uint64_t j, int precision_bits) {
  double u = to_grid(eval_index(u_src, j), precision_bits).value();
  double v = to_grid(eval_index(v_src, j), precision_bits).value();
  return box_muller(UnitPair{u, v});
}

double default_coupling_delta(int precision_bits) {
  return std::exp2(1.0 - precision_bits / 2.0);
}

CoupledSample coupled_sample(UnitPair pair, int precision_bits, double delta) {
  if (precision_bits < 1 || precision_bits > 53) {
    throw std::invalid_argument("coupled_sample: precision must be in [1, 53]");
  }
  double scale = std::exp2(precision_bits);
  // multiplying by a power of two is exact, so the floor lands on the true cell
  double u_trunc = std::floor(pair.u * scale);
  if (u_trunc < 1.0) u_trunc = 1.0;
  double v_trunc = std::floor(pair.v * scale);
  CoupledSample out;
  out.exact_y = box_muller(pair);
  out.truncated_x = box_muller(UnitPair{u_trunc / scale, v_trunc / scale});
  out.delta_bound = delta < 0.0 ? default_coupling_delta(precision_bits) : delta;
  return out;
}

}  // namespace gaussprg
