#include "gaussprg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "gaussprg/gaussian.hpp"
#include "gaussprg/mollifier.hpp"
#include "gaussprg/parallel.hpp"

namespace gaussprg {

namespace {

inline uint64_t splitmix_out(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

uint64_t fnv1a64(std::span<const std::byte> bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (std::byte b : bytes) {
    h ^= std::to_integer<uint8_t>(b);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t mix_seeds(uint64_t a, uint64_t b) {
  return splitmix_out(a + 0x9e3779b97f4a7c15ull * (b + 1));
}

}  // namespace

double hoeffding_half_width(uint64_t n_samples, double confidence) {
  if (n_samples == 0) throw std::invalid_argument("hoeffding_half_width: need samples");
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw std::invalid_argument("hoeffding_half_width: confidence must lie in (0, 1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n_samples)));
}

EstimateCI estimate_mean(const PtfFunction& F, const ChunkSamplerFactory& make_sampler,
                         uint64_t n_samples, double confidence) {
  if (n_samples < 100) throw std::invalid_argument("estimate_mean: N must be >= 100");
  F.validate();
  uint32_t dim = F.dimension();
  uint64_t n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<uint64_t> ones(n_chunks, 0);
  parallel_for_chunks(n_chunks, [&](uint64_t c) {
    auto sampler = make_sampler(c);
    uint64_t count = std::min(kChunkSize, n_samples - c * kChunkSize);
    std::vector<double> buf(dim);
    uint64_t acc = 0;
    for (uint64_t i = 0; i < count; ++i) {
      sampler(buf);
      acc += static_cast<uint64_t>(eval_F(F, buf));
    }
    ones[c] = acc;
  });
  uint64_t total = 0;
  for (uint64_t c = 0; c < n_chunks; ++c) total += ones[c];  // in-order, integer-exact
  EstimateCI est;
  est.mean = static_cast<double>(total) / static_cast<double>(n_samples);
  est.n_samples = n_samples;
  est.half_width = hoeffding_half_width(n_samples, confidence);
  est.confidence = confidence;
  return est;
}

std::vector<std::byte> expand_arm_seed(std::span<const std::byte> master, uint64_t draw_index,
                                       size_t out_bytes) {
  uint64_t state = mix_seeds(fnv1a64(master), draw_index);
  std::vector<std::byte> out(out_bytes);
  size_t pos = 0;
  while (pos < out_bytes) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t w = splitmix_out(state);
    for (int b = 0; b < 8 && pos < out_bytes; ++b, ++pos) {
      out[pos] = static_cast<std::byte>((w >> (8 * b)) & 0xff);
    }
  }
  return out;
}

uint64_t gaussian_chunk_seed(std::span<const std::byte> master, uint64_t chunk_index) {
  return mix_seeds(fnv1a64(master) ^ 0x67617573735f6172ull, chunk_index);
}

ChunkSamplerFactory prg_arm_sampler(const PrgParams& params, std::vector<std::byte> master) {
  auto master_ptr = std::make_shared<std::vector<std::byte>>(std::move(master));
  size_t seed_bytes = static_cast<size_t>((seed_length_bits(params) + 7) / 8);
  return [params, master_ptr, seed_bytes](uint64_t chunk) {
    auto counter = std::make_shared<uint64_t>(chunk * kChunkSize);
    return [params, master_ptr, seed_bytes, counter](std::span<double> out) {
      std::vector<std::byte> seed = expand_arm_seed(*master_ptr, (*counter)++, seed_bytes);
      PrgOutput o = generate(params, seed);
      std::copy(o.x.begin(), o.x.end(), out.begin());
    };
  };
}

ChunkSamplerFactory gaussian_arm_sampler(uint32_t n, std::vector<std::byte> master) {
  auto master_ptr = std::make_shared<std::vector<std::byte>>(std::move(master));
  return [n, master_ptr](uint64_t chunk) {
    auto stream = std::make_shared<ReferenceGaussianStream>(n, gaussian_chunk_seed(*master_ptr, chunk));
    return [stream](std::span<double> out) { stream->next_vector(out); };
  };
}

GapReport fooling_gap(const PtfFunction& F, const PrgParams& params, uint64_t n_per_arm,
                      std::span<const std::byte> master_seed) {
  F.validate();
  if (F.dimension() != params.n) throw std::invalid_argument("fooling_gap: family dimension != params.n");
  if (n_per_arm < 1000) throw std::invalid_argument("fooling_gap: N must be >= 1000");
  std::vector<std::byte> master(master_seed.begin(), master_seed.end());
  GapReport rep;
  rep.prg_estimate = estimate_mean(F, prg_arm_sampler(params, master), n_per_arm);
  rep.gaussian_estimate = estimate_mean(F, gaussian_arm_sampler(params.n, master), n_per_arm);
  rep.gap = std::abs(rep.prg_estimate.mean - rep.gaussian_estimate.mean);
  rep.gap_bound = rep.prg_estimate.half_width + rep.gaussian_estimate.half_width;
  rep.target_eps = params.eps;
  rep.params = params;
  rep.family_digest = family_digest(F);
  rep.master_seed_hex = hex_from_bytes(master_seed);
  rep.pass = rep.gap <= rep.target_eps + rep.gap_bound;
  return rep;
}

// ---- exact independence ----

namespace {

void next_combination(std::vector<size_t>& pick, size_t n, bool& done) {
  size_t k = pick.size();
  for (size_t i = k; i-- > 0;) {
    if (pick[i] + (k - i) < n) {
      ++pick[i];
      for (size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
      return;
    }
  }
  done = true;
}

}  // namespace

IndependenceReport exhaustive_independence_test(uint64_t p, uint32_t source_t, uint32_t test_t,
                                                std::vector<uint64_t> indices) {
  PrimeField field(p);
  if (source_t < 1 || test_t < 1) throw std::invalid_argument("independence test: wiseness must be >= 1");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw std::invalid_argument("independence test: indices must be distinct");
  }
  if (indices.empty() || indices.back() >= p) {
    throw std::invalid_argument("independence test: indices must be nonempty and < p");
  }

  double tuples = std::pow(static_cast<double>(p), static_cast<double>(source_t));
  if (tuples > 1e7) {
    throw std::invalid_argument("independence test: instance too large (" + std::to_string(tuples) +
                                " seed tuples > 1e7); refuse");
  }
  uint64_t n_tuples = 1;
  for (uint32_t i = 0; i < source_t; ++i) n_tuples *= p;

  IndependenceReport rep;
  rep.field_modulus = p;
  rep.source_wiseness = source_t;
  rep.tested_wiseness = test_t;
  rep.indices = indices;
  rep.seed_tuples = n_tuples;
  rep.pass = true;

  KWisePolySource src;
  src.field = field;
  src.wiseness = source_t;
  src.coeffs.assign(source_t, 0);

  for (uint32_t s = 1; s <= test_t && s <= indices.size(); ++s) {
    if (s > source_t) {
      // more tested coordinates than the source degree supports: uniformity
      // over p^s cells is impossible with p^source_t equally weighted seeds
      rep.pass = false;
      rep.detail = "subset size " + std::to_string(s) + " exceeds source wiseness " +
                   std::to_string(source_t) + ": joint uniformity impossible";
      // still run the histogram on the first subset to demonstrate it
    }
    double cells_needed = std::pow(static_cast<double>(p), static_cast<double>(s));
    if (cells_needed > 1e7) {
      throw std::invalid_argument("independence test: " + std::to_string(cells_needed) +
                                  " histogram cells > 1e7; refuse");
    }
    std::vector<size_t> pick(s);
    for (size_t i = 0; i < s; ++i) pick[i] = i;
    bool done = false;
    while (!done) {
      uint64_t cells = 1;
      for (uint32_t i = 0; i < s; ++i) cells *= p;
      std::vector<uint64_t> histogram(cells, 0);

      // odometer over every coefficient tuple
      std::fill(src.coeffs.begin(), src.coeffs.end(), 0);
      for (uint64_t tup = 0; tup < n_tuples; ++tup) {
        uint64_t cell = 0;
        for (size_t i = 0; i < s; ++i) cell = cell * p + eval_index(src, indices[pick[i]]);
        ++histogram[cell];
        for (uint32_t c = 0; c < source_t; ++c) {
          if (++src.coeffs[c] < p) break;
          src.coeffs[c] = 0;
        }
      }

      uint64_t expected = s <= source_t ? n_tuples / cells : 0;
      for (uint64_t cell = 0; cell < cells; ++cell) {
        if (histogram[cell] != expected) {
          rep.pass = false;
          if (rep.detail.empty()) {
            rep.detail = "subset size " + std::to_string(s) + " cell " + std::to_string(cell) +
                         " has count " + std::to_string(histogram[cell]) + ", expected " +
                         std::to_string(expected);
          }
          break;
        }
      }
      if (!rep.pass && s > source_t) return rep;  // negative case demonstrated
      next_combination(pick, indices.size(), done);
    }
  }
  return rep;
}

// ---- coupling ----

CouplingReport coupling_test(int precision_bits, double delta, uint64_t n_samples, uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("coupling_test: N must be >= 100");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("coupling_test: delta must lie in (0, 1)");
  std::mt19937_64 eng(seed);
  auto unit = [&] { return std::ldexp(static_cast<double>((eng() >> 11) + 1), -53); };
  uint64_t close = 0;
  for (uint64_t i = 0; i < n_samples; ++i) {
    UnitPair pair{unit(), unit()};
    CoupledSample cs = coupled_sample(pair, precision_bits, delta);
    if (std::abs(cs.exact_y - cs.truncated_x) <= delta) ++close;
  }
  CouplingReport rep;
  rep.precision_bits = precision_bits;
  rep.delta = delta;
  rep.n_samples = n_samples;
  rep.rate = static_cast<double>(close) / static_cast<double>(n_samples);
  double se = std::sqrt(delta * (1.0 - delta) / static_cast<double>(n_samples));
  rep.threshold = 1.0 - delta - 3.0 * se;
  rep.pass = rep.rate >= rep.threshold;
  return rep;
}

// ---- anti-concentration ----

AntiConcentrationReport anti_concentration_test(uint32_t degree, double eps, uint64_t n_samples,
                                                uint32_t trials, double c, uint32_t dimension,
                                                uint64_t seed) {
  if (degree < 1 || trials < 1) throw std::invalid_argument("anti_concentration_test: bad arguments");
  AntiConcentrationReport rep;
  rep.degree = degree;
  rep.eps = eps;
  rep.c = c;
  rep.dimension = dimension;
  rep.trials = trials;
  rep.n_samples = n_samples;
  rep.bound = c * degree * std::pow(eps, 1.0 / degree);
  rep.pass = true;
  for (uint32_t trial = 0; trial < trials; ++trial) {
    MonomialPoly p = random_poly(mix_seeds(seed, trial), dimension, degree, /*normalize=*/true);
    ReferenceGaussianStream ys(dimension, mix_seeds(seed ^ 0xa5c3ull, trial));
    std::vector<double> y(dimension);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < n_samples; ++i) {
      ys.next_vector(y);
      if (std::abs(eval(p, y)) <= eps) ++hits;
    }
    double rate = static_cast<double>(hits) / static_cast<double>(n_samples);
    double se = std::sqrt(rate * (1.0 - rate) / static_cast<double>(n_samples));
    if (rate > rep.bound + 3.0 * se) rep.pass = false;
    rep.worst_rate = std::max(rep.worst_rate, rate);
  }
  return rep;
}

// ---- lemma checks ----

ExpansionIdentityResult expansion_identity_check(uint64_t seed, uint32_t instances, double tol,
                                                 double corruption) {
  const double lambdas[] = {0.0, 0.1, 0.5};
  ExpansionIdentityResult res;
  res.pass = true;
  for (uint32_t inst = 0; inst < instances; ++inst) {
    uint32_t n = 1 + inst % 3;
    uint32_t d = 1 + inst % 4;
    double lambda = lambdas[inst % 3];
    MonomialPoly p = random_poly(mix_seeds(seed, inst), n, d, /*normalize=*/false);
    std::mt19937_64 eng(mix_seeds(seed ^ 0x9e1, inst));
    auto gauss = [&] {
      double u = std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);
      double v = std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);
      return box_muller(UnitPair{u, v});
    };
    std::vector<double> x(n);
    for (auto& xi : x) xi = gauss();
    HermiteExpansion e = shift_expansion(p, x, lambda);
    if (corruption != 0.0) {
      HermiteExpansion bad(e.dimension());
      for (const auto& [idx, cc] : e.coeffs()) bad.add_coeff(idx, cc);
      bad.add_coeff(MultiIndex{}, corruption);
      e = std::move(bad);
    }
    std::vector<double> y(n), shifted(n);
    double sl = std::sqrt(lambda);
    for (int pt = 0; pt < 20; ++pt) {
      for (uint32_t i = 0; i < n; ++i) {
        y[i] = gauss();
        shifted[i] = x[i] + sl * y[i];
      }
      double lhs = eval(e, y);
      double rhs = eval(p, shifted);
      double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
      res.max_rel_err = std::max(res.max_rel_err, rel);
    }
  }
  res.pass = res.max_rel_err <= tol;
  return res;
}

HypercontractivityResult hypercontractivity_check(uint64_t seed, uint32_t instances, uint64_t n_samples) {
  HypercontractivityResult res;
  res.pass = true;
  res.worst_margin = -1e300;
  for (uint32_t inst = 0; inst < instances; ++inst) {
    uint32_t n = 1 + inst % 3;
    uint32_t d = 1 + inst % 3;
    MonomialPoly p = random_poly(mix_seeds(seed, inst), n, d, /*normalize=*/true);
    HermiteExpansion e = to_hermite(p);
    double rhs = l2_norm(noise_operator(e, std::sqrt(3.0)));  // ||U_{sqrt(p-1)} f||_2 at p = 4

    ReferenceGaussianStream ys(n, mix_seeds(seed ^ 0x4443, inst));
    std::vector<double> y(n);
    double sum4 = 0.0, sum8 = 0.0;
    for (uint64_t i = 0; i < n_samples; ++i) {
      ys.next_vector(y);
      double v = eval(p, y);
      double v4 = v * v * v * v;
      sum4 += v4;
      sum8 += v4 * v4;
    }
    double m4 = sum4 / static_cast<double>(n_samples);
    double var4 = std::max(0.0, sum8 / static_cast<double>(n_samples) - m4 * m4);
    double se4 = std::sqrt(var4 / static_cast<double>(n_samples));
    double lhs = std::pow(m4, 0.25);
    // delta method: d/dm m^(1/4) = m^(-3/4)/4
    double se_lhs = m4 > 0.0 ? se4 * 0.25 * std::pow(m4, -0.75) : 0.0;
    double margin = lhs - (rhs + 3.0 * se_lhs);
    res.worst_margin = std::max(res.worst_margin, margin);
    if (margin > 0.0) res.pass = false;
  }
  return res;
}

GradientGrowthResult gradient_growth_check(uint64_t seed, uint32_t degree, double eps, double c,
                                           uint32_t dimension, uint64_t points) {
  MonomialPoly p = random_poly(seed, dimension, degree, /*normalize=*/true);
  std::vector<std::vector<std::pair<MultiIndex, MonomialPoly>>> grads(degree + 1);
  for (uint32_t t = 0; t <= degree; ++t) grads[t] = gradient_components(p, t);
  auto norm_at = [&](uint32_t t, std::span<const double> y) {
    double sum = 0.0;
    for (const auto& [alpha, dp] : grads[t]) {
      double v = eval(dp, y);
      sum += v * v;
    }
    return std::sqrt(sum);
  };
  ReferenceGaussianStream ys(dimension, mix_seeds(seed ^ 0x99ade, 7));
  std::vector<double> y(dimension);
  uint64_t good = 0;
  for (uint64_t i = 0; i < points; ++i) {
    ys.next_vector(y);
    bool ok = true;
    double prev = norm_at(0, y);
    for (uint32_t t = 1; t <= degree; ++t) {
      double cur = norm_at(t, y);
      if (cur > (c / eps) * prev) {
        ok = false;
        break;
      }
      prev = cur;
    }
    if (ok) ++good;
  }
  GradientGrowthResult res;
  res.rate = static_cast<double>(good) / static_cast<double>(points);
  res.threshold = 1.0 - eps * std::pow(static_cast<double>(degree), 3.0);
  res.pass = res.rate >= res.threshold;
  return res;
}

PerturbationResult perturbation_check(uint64_t seed, uint32_t degree, uint32_t dimension,
                                      uint32_t trials, double B, double delta, double c) {
  PerturbationResult res;
  res.pass = true;
  std::mt19937_64 eng(mix_seeds(seed, degree));
  auto uniform = [&](double lo, double hi) {
    double u = std::ldexp(static_cast<double>(eng() >> 11), -53);
    return lo + (hi - lo) * u;
  };
  double bound = delta * std::pow(static_cast<double>(dimension), degree / 2.0) * std::pow(c * B, degree);
  std::vector<double> x(dimension), xp(dimension);
  for (uint32_t trial = 0; trial < trials; ++trial) {
    MonomialPoly p = random_poly(mix_seeds(seed ^ 0x8f, trial), dimension, degree, /*normalize=*/true);
    for (uint32_t i = 0; i < dimension; ++i) {
      x[i] = uniform(-B, B);
      xp[i] = x[i] + uniform(-delta, delta);
    }
    double diff = std::abs(eval(p, x) - eval(p, xp));
    res.worst_ratio = std::max(res.worst_ratio, diff / bound);
  }
  res.pass = res.worst_ratio <= 1.0;
  return res;
}

DerivConcentrationResult derivative_concentration_r2_check(uint64_t seed, uint32_t instances) {
  DerivConcentrationResult res;
  res.pass = true;
  const double lambdas[] = {0.3, 0.05};
  for (uint32_t inst = 0; inst < instances; ++inst) {
    uint32_t n = 1 + inst % 2;
    uint32_t d = 2 + inst % 2;
    double lambda = lambdas[inst % 2];
    MonomialPoly p = random_poly(mix_seeds(seed, inst), n, d, /*normalize=*/false);
    std::mt19937_64 eng(mix_seeds(seed ^ 0xd5, inst));
    std::vector<double> x(n);
    for (auto& xi : x) {
      double u = std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);
      double v = std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);
      xi = box_muller(UnitPair{u, v});
    }
    MonomialPoly phi = smooth(p, lambda);
    double sl = std::sqrt(lambda);
    for (uint32_t t = 0; t < d; ++t) {
      // exact second moment per component through the Hermite coefficients
      double lhs_sq = 0.0;
      for (const auto& [alpha, dp] : gradient_components(p, t)) {
        HermiteExpansion he = to_hermite(compose_affine(dp, x, sl));
        for (const auto& [beta, cc] : he.coeffs()) {
          if (!beta.is_zero()) lhs_sq += cc * cc;  // variance: drop the mean term
        }
      }
      double rhs_sq = 0.0;
      for (uint32_t j = t + 1; j <= d; ++j) {
        double g = gradient_norm(phi, x, j);
        rhs_sq += std::pow(lambda * d * 2.0, static_cast<double>(j - t)) * g * g;
      }
      double ratio;
      if (rhs_sq == 0.0) {
        ratio = lhs_sq <= 1e-18 ? 0.0 : 1e300;
      } else {
        ratio = lhs_sq / rhs_sq;
      }
      res.worst_ratio = std::max(res.worst_ratio, ratio);
    }
  }
  res.pass = res.worst_ratio <= 1.0 + 1e-9;
  return res;
}

LemmaSuiteReport lemma_suite(uint64_t seed) {
  LemmaSuiteReport rep;
  auto add = [&](std::string name, bool pass, double margin, std::string detail) {
    rep.checks.push_back(LemmaCheck{std::move(name), pass, margin, std::move(detail)});
  };

  auto expansion = expansion_identity_check(seed, 50, 1e-8);
  add("expansion_identity", expansion.pass, expansion.max_rel_err, "max relative error vs direct evaluation");

  auto faulty = expansion_identity_check(seed, 50, 1e-8, /*corruption=*/1e-3);
  add("expansion_identity_fault_injection", !faulty.pass, faulty.max_rel_err,
      "corrupted constant coefficient must break the identity");

  auto hc = hypercontractivity_check(seed, 10, 100000);
  add("hypercontractivity_p4", hc.pass, hc.worst_margin, "||f||_4 - (||U_sqrt3 f||_2 + 3 SE), worst instance");

  auto gg1 = gradient_growth_check(seed, 3, 0.05, 10.0, 2, 10000);
  add("gradient_growth_d3", gg1.pass, gg1.rate, "empirical rate vs threshold " + std::to_string(gg1.threshold));

  auto gg2 = gradient_growth_check(seed ^ 0x2717, 2, 0.02, 10.0, 2, 10000);
  add("gradient_growth_d2", gg2.pass, gg2.rate, "empirical rate vs threshold " + std::to_string(gg2.threshold));

  auto pert2 = perturbation_check(seed, 2, 4, 1000, 2.0, 1e-3, 8.0);
  add("perturbation_d2", pert2.pass, pert2.worst_ratio, "worst |p(x)-p(x')| / bound");

  auto pert3 = perturbation_check(seed ^ 0x5b5b, 3, 4, 1000, 2.0, 1e-3, 8.0);
  add("perturbation_d3", pert3.pass, pert3.worst_ratio, "worst |p(x)-p(x')| / bound");

  auto dc = derivative_concentration_r2_check(seed, 12);
  add("derivative_concentration_r2", dc.pass, dc.worst_ratio, "worst exact LHS^2 / RHS^2 at R = 2");

  bool bumps_ok = true;
  double worst_ratio = 0.0;
  for (int t = 2; t <= 4; ++t) {
    auto b = derivative_bound_check(t);
    bumps_ok = bumps_ok && b.pass;
    worst_ratio = std::max(worst_ratio, std::max(b.max_abs_psi, b.max_abs_rho) / b.bound);
  }
  add("bump_derivative_bounds", bumps_ok, worst_ratio, "max finite-difference derivative / t^(6t), t in 2..4");

  rep.all_pass = true;
  for (const auto& check : rep.checks) rep.all_pass = rep.all_pass && check.pass;
  return rep;
}

}  // namespace gaussprg
