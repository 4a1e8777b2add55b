#include "gaussprg/prg.hpp"

#include <cmath>
#include <stdexcept>

#include "gaussprg/gaussian.hpp"
#include "gaussprg/parallel.hpp"

namespace gaussprg {

PrimeField PrgParams::field() const {
  if (field_modulus == 0) {
    throw std::invalid_argument("PrgParams: field modulus too large to materialize; "
                                "parameters are accounting-only at this size");
  }
  return PrimeField(field_modulus);
}

PrgParams derive_params(uint32_t k, uint32_t d, double eps, uint32_t n, const PrgOverrides& ov) {
  if (k < 1 || d < 1 || n < 1) throw std::invalid_argument("derive_params: k, d, n must be >= 1");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("derive_params: eps must lie in (0, 1)");

  PrgParams p;
  p.n = n;
  p.k = k;
  p.d = d;
  p.eps = eps;
  p.C = ov.C;
  p.C_L = ov.C_L;
  p.C_M = ov.C_M;
  p.bias_margin = ov.bias_margin;

  double lg = std::log2(static_cast<double>(k) * d / eps);
  double lgn = std::log2(static_cast<double>(k) * d * n / eps);

  if (ov.R) {
    p.R = *ov.R;
    p.overridden.push_back("R");
  } else {
    p.R = static_cast<uint64_t>(std::ceil(ov.C * lg));
    if (p.R < 1) p.R = 1;
  }

  if (ov.L) {
    p.L = *ov.L;
    p.overridden.push_back("L");
  } else {
    double l = std::ceil(ov.C_L * std::pow(static_cast<double>(k), 4) * std::pow(static_cast<double>(d), 9) /
                         (eps * eps) * lg * lg * lg);
    if (!(l >= 1.0)) l = 1.0;
    if (l > 9.0e18) throw std::invalid_argument("derive_params: L overflows 64 bits");
    p.L = static_cast<uint64_t>(l);
  }

  if (ov.M) {
    p.M = *ov.M;
    p.overridden.push_back("M");
  } else {
    double m = std::ceil(ov.C_M * static_cast<double>(k) * d * lgn);
    p.M = m < 2.0 ? 2u : static_cast<uint32_t>(m);  // M_min = 2
  }
  if (p.M < 2) p.M = 2;

  if (ov.wiseness) {
    p.wiseness = *ov.wiseness;
    p.overridden.push_back("wiseness");
  } else {
    p.wiseness = 2 * static_cast<uint64_t>(d) * p.R;
  }
  if (p.wiseness < 1) throw std::invalid_argument("derive_params: wiseness must be >= 1");

  if (ov.field_modulus) {
    PrimeField pf(*ov.field_modulus);  // validates primality
    if (p.M > 62 || pf.modulus < (uint64_t{1} << p.M)) {
      throw std::invalid_argument("derive_params: field modulus must be >= 2^M");
    }
    p.field_modulus = pf.modulus;
    p.field_bit_width = pf.bit_width;
    p.overridden.push_back("field_modulus");
    return p;
  }
  uint32_t total_bits = p.M + p.bias_margin;
  if (total_bits <= 62) {
    uint64_t lo = uint64_t{1} << total_bits;
    uint64_t modulus = min_prime_at_least(lo);
    p.field_modulus = modulus;
    p.field_bit_width = ceil_log2(modulus);
  } else {
    // smallest prime above 2^t always has t+1 bits; record the width only
    p.field_modulus = 0;
    p.field_bit_width = static_cast<int>(total_bits) + 1;
  }
  return p;
}

uint64_t seed_length_bits(const PrgParams& params) {
  return params.L * 2 * params.wiseness * static_cast<uint64_t>(params.field_bit_width);
}

PrgOutput generate(const PrgParams& params, std::span<const std::byte> seed) {
  PrimeField field = params.field();
  if (params.M < 1 || params.M > 62) {
    throw std::invalid_argument("generate: grid precision must lie in [1, 62]");
  }
  if (params.wiseness > 0xffffffffull) throw std::invalid_argument("generate: wiseness too large");
  uint64_t need = seed_length_bits(params);
  if (seed.size() * 8 < need) {
    throw std::invalid_argument("generate: seed supplies " + std::to_string(seed.size() * 8) +
                                " bits but " + std::to_string(need) + " are required");
  }
  if (params.L > (uint64_t{1} << 31)) throw std::invalid_argument("generate: L too large to generate");

  SeedStream stream(seed);
  size_t seed_bits = seed.size() * 8;
  uint32_t n = params.n;
  uint64_t L = params.L;
  auto t = static_cast<uint32_t>(params.wiseness);

  std::vector<double> blocks(L * n);
  auto fill_block = [&](uint64_t i) {
    KWisePolySource u_src = derive_source(stream, seed_bits, t, static_cast<uint32_t>(2 * i), field);
    KWisePolySource v_src = derive_source(stream, seed_bits, t, static_cast<uint32_t>(2 * i + 1), field);
    for (uint32_t j = 0; j < n; ++j) {
      blocks[i * n + j] = sample_block_coordinate(u_src, v_src, j, static_cast<int>(params.M));
    }
  };
  // small block counts run serially; the harness already parallelizes draws
  if (L >= 512) {
    parallel_for_chunks(L, fill_block);
  } else {
    for (uint64_t i = 0; i < L; ++i) fill_block(i);
  }

  PrgOutput out;
  out.params = params;
  out.seed_digest = stream.digest_hex();
  out.x.assign(n, 0.0);
  for (uint64_t i = 0; i < L; ++i) {  // fixed order keeps the sum bit-identical
    for (uint32_t j = 0; j < n; ++j) out.x[j] += blocks[i * n + j];
  }
  double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (uint32_t j = 0; j < n; ++j) out.x[j] *= scale;
  return out;
}

double ReferenceGaussianStream::next() {
  double u = std::ldexp(static_cast<double>((eng_() >> 11) + 1), -53);  // (0, 1]
  double v = std::ldexp(static_cast<double>((eng_() >> 11) + 1), -53);
  return box_muller(UnitPair{u, v});
}

void ReferenceGaussianStream::next_vector(std::span<double> out) {
  for (double& slot : out) slot = next();
}

std::vector<std::vector<double>> generate_reference(uint32_t n, uint64_t rng_seed, uint64_t count) {
  if (count < 1) throw std::invalid_argument("generate_reference: count must be >= 1");
  ReferenceGaussianStream stream(n, rng_seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(n));
  for (auto& vec : out) stream.next_vector(vec);
  return out;
}

}  // namespace gaussprg
