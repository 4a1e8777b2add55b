#include "gaussprg/ptf.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <stdexcept>

#include "gaussprg/gaussian.hpp"

namespace gaussprg {

void PtfFunction::validate() const {
  if (polys.empty()) throw std::invalid_argument("PtfFunction: k must be >= 1");
  if (polys.size() > 20) throw std::invalid_argument("PtfFunction: k too large for a dense combiner");
  for (const auto& p : polys) {
    if (p.dimension() != polys.front().dimension()) {
      throw std::invalid_argument("PtfFunction: polynomials must share one dimension");
    }
  }
  if (combiner.size() != (size_t{1} << polys.size())) {
    throw std::invalid_argument("PtfFunction: combiner table must have exactly 2^k entries");
  }
  for (uint8_t b : combiner) {
    if (b > 1) throw std::invalid_argument("PtfFunction: combiner entries must be 0 or 1");
  }
}

uint32_t sign_index(const PtfFunction& f, std::span<const double> x) {
  uint32_t idx = 0;
  for (uint32_t i = 0; i < f.k(); ++i) {
    idx |= static_cast<uint32_t>(sign_of(eval(f.polys[i], x))) << i;
  }
  return idx;
}

int eval_F(const PtfFunction& f, std::span<const double> x) {
  return f.combiner[sign_index(f, x)];
}

namespace {

// portable Gaussian draw: mt19937_64 is bit-exact everywhere, and the
// transform below avoids the implementation-defined std::normal_distribution
double gauss_draw(std::mt19937_64& eng) {
  double u = std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);  // (0, 1]
  double v = std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);
  return box_muller(UnitPair{u, v});
}

MonomialPoly random_poly_from_engine(std::mt19937_64& eng, uint32_t n, uint32_t d, bool normalize) {
  std::vector<uint32_t> coords(n);
  for (uint32_t i = 0; i < n; ++i) coords[i] = i;
  HermiteExpansion e(n);
  for (uint32_t t = 0; t <= d; ++t) {
    for_each_multi_index(coords, t, [&](const MultiIndex& alpha) { e.add_coeff(alpha, gauss_draw(eng)); });
  }
  if (normalize) {
    double norm = l2_norm(e);
    HermiteExpansion scaled_e(n);
    for (const auto& [idx, c] : e.coeffs()) scaled_e.add_coeff(idx, c / norm);
    e = std::move(scaled_e);
  }
  return from_hermite(e);
}

}  // namespace

MonomialPoly random_poly(uint64_t rng_seed, uint32_t n, uint32_t d, bool normalize) {
  std::mt19937_64 eng(rng_seed);
  return random_poly_from_engine(eng, n, d, normalize);
}

PtfFunction random_family(uint64_t rng_seed, uint32_t n, uint32_t d, uint32_t k, bool normalize) {
  if (n < 1 || d < 1 || k < 1) throw std::invalid_argument("random_family: n, d, k must be >= 1");
  std::mt19937_64 eng(rng_seed);
  PtfFunction f;
  f.polys.reserve(k);
  for (uint32_t i = 0; i < k; ++i) f.polys.push_back(random_poly_from_engine(eng, n, d, normalize));
  f.combiner.resize(size_t{1} << k);
  for (auto& bit : f.combiner) bit = static_cast<uint8_t>(eng() & 1);
  f.validate();
  return f;
}

PtfFunction axis_intersection_family(uint32_t n, uint32_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("axis_intersection_family: need 1 <= k <= n");
  PtfFunction f;
  for (uint32_t i = 0; i < k; ++i) {
    MonomialPoly p(n);
    p.add_term(MultiIndex::unit(i), 1.0);
    f.polys.push_back(std::move(p));
  }
  f.combiner.assign(size_t{1} << k, 0);
  f.combiner.back() = 1;  // all signs positive
  f.validate();
  return f;
}

namespace {

void fnv_absorb(uint64_t& h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
}

}  // namespace

std::string family_digest(const PtfFunction& f) {
  uint64_t h = 0xcbf29ce484222325ull;
  fnv_absorb(h, f.k());
  fnv_absorb(h, f.dimension());
  for (const auto& p : f.polys) {
    fnv_absorb(h, p.terms().size());
    for (const auto& [idx, c] : p.terms()) {
      for (const auto& [coord, exp] : idx.entries()) {
        fnv_absorb(h, coord);
        fnv_absorb(h, exp);
      }
      uint64_t bits;
      static_assert(sizeof(bits) == sizeof(c));
      std::memcpy(&bits, &c, sizeof(bits));
      fnv_absorb(h, bits);
    }
  }
  for (uint8_t b : f.combiner) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace gaussprg
