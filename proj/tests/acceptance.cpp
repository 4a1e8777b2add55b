// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criteria 1 and 9 drive the CLI binary; the rest use the library.
//
// usage: acceptance <path-to-gaussprg>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gaussprg/gaussian.hpp"
#include "gaussprg/harness.hpp"
#include "gaussprg/mollifier.hpp"
#include "gaussprg/prg.hpp"
#include "gaussprg/ptf.hpp"
#include "support/oracles.hpp"

using namespace gaussprg;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
int g_failures = 0;

struct Shell {
  int exit_code = -1;
  std::string out;
};

Shell shell(const std::string& command) {
  Shell res;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return res;
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

void report(int id, const char* name, bool pass, double seconds, double limit,
            const std::string& detail) {
  bool in_time = seconds < limit;
  bool ok = pass && in_time;
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %d: %-28s %6.2fs (< %.0fs)  %s\n", ok ? "PASS" : "FAIL", id, name,
              seconds, limit, detail.c_str());
  std::fflush(stdout);
}

double unit_from(std::mt19937_64& eng) {
  return std::ldexp(static_cast<double>((eng() >> 11) + 1), -53);
}

// 1. exact t-wise independence through the CLI, with the negative control
void criterion_1() {
  auto t0 = Clock::now();
  auto pos = shell(g_cli + " diag independence --p 13 --t 3 --indices 0,1,2,3,4,5");
  auto neg = shell(g_cli + " diag independence --p 13 --t 2 --test-t 3 --indices 0,1,2");
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = pos.exit_code == 0 && neg.exit_code == 1;
  std::ostringstream d;
  d << "p=13 t=3 exit " << pos.exit_code << ", t=2 3-wise control exit " << neg.exit_code;
  report(1, "t-wise independence", pass, dt, 5.0, d.str());
}

// 2. Box-Muller moments and KS against N(0,1)
void criterion_2() {
  auto t0 = Clock::now();
  std::mt19937_64 eng(0xb0cce11a);
  const int N = 1000000;
  std::vector<double> samples(N);
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (int i = 0; i < N; ++i) {
    double u = unit_from(eng), v = unit_from(eng);
    double y = box_muller({u, v});
    samples[i] = y;
    m1 += y;
    m2 += y * y;
    m3 += y * y * y;
    m4 += y * y * y * y;
  }
  m1 /= N; m2 /= N; m3 /= N; m4 /= N;
  double D = oracles::ks_statistic(std::move(samples), oracles::normal_cdf);
  double crit = oracles::ks_critical_001(N);
  bool pass = std::abs(m1) < 0.01 && std::abs(m2 - 1) < 0.02 && std::abs(m3) < 0.03 &&
              std::abs(m4 - 3) < 0.06 && D < crit;
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  std::ostringstream d;
  d << "moments (" << m1 << ", " << m2 << ", " << m3 << ", " << m4 << "), KS " << D << " < " << crit;
  report(2, "Box-Muller correctness", pass, dt, 10.0, d.str());
}

// 3. coupling at M=16 with the M=2 negative control
void criterion_3() {
  auto t0 = Clock::now();
  double delta = std::exp2(-7);
  auto fine = coupling_test(16, delta, 100000, 0xacce97);
  auto coarse = coupling_test(2, delta, 100000, 0xacce97);
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = fine.pass && !coarse.pass;
  std::ostringstream d;
  d << "M=16 rate " << fine.rate << " >= " << fine.threshold << "; M=2 rate " << coarse.rate;
  report(3, "coupling (discretization)", pass, dt, 5.0, d.str());
}

// 4. Hermite stack: orthonormality, round trip, closed-form norm, noise law
void criterion_4() {
  auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream d;

  // orthonormality over n = 2 with |alpha|, |beta| <= 6 by tensor quadrature
  auto rule = oracles::gauss_hermite(16);
  std::vector<MultiIndex> basis;
  std::vector<uint32_t> coords{0, 1};
  for (uint32_t t = 0; t <= 6; ++t) {
    for_each_multi_index(coords, t, [&](const MultiIndex& alpha) { basis.push_back(alpha); });
  }
  double worst_orth = 0.0;
  for (const auto& alpha : basis) {
    for (const auto& beta : basis) {
      double integral = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        for (size_t j = 0; j < rule.nodes.size(); ++j) {
          std::array<double, 2> y{rule.nodes[i], rule.nodes[j]};
          integral += rule.weights[i] * rule.weights[j] * hermite_eval(alpha, y) * hermite_eval(beta, y);
        }
      }
      double want = alpha == beta ? 1.0 : 0.0;
      worst_orth = std::max(worst_orth, std::abs(integral - want));
    }
  }
  pass = pass && worst_orth < 1e-9;
  d << "orth err " << worst_orth;

  // monomial <-> Hermite round trip to 1e-12
  double worst_rt = 0.0;
  std::mt19937_64 eng(0x42);
  for (int trial = 0; trial < 8; ++trial) {
    MonomialPoly p = random_poly(eng(), 1 + trial % 3, 1 + trial % 6, false);
    MonomialPoly back = from_hermite(to_hermite(p));
    for (const auto& [idx, c] : p.terms()) {
      double scale = std::max(1.0, std::abs(c));
      worst_rt = std::max(worst_rt, std::abs(back.coefficient(idx) - c) / scale);
    }
  }
  pass = pass && worst_rt < 1e-12;
  d << ", round-trip err " << worst_rt;

  // l2_norm(y^2) = sqrt(3)
  MonomialPoly sq(1);
  sq.add_term(MultiIndex::unit(0, 2), 1.0);
  double norm_err = std::abs(l2_norm(sq) - std::sqrt(3.0));
  pass = pass && norm_err < 1e-12;
  d << ", |l2-sqrt3| " << norm_err;

  // noise operator semigroup, exact on dyadic rho
  MonomialPoly rnd = random_poly(0x1db7, 2, 4, false);
  auto e = to_hermite(rnd);
  bool noise_exact = noise_operator(noise_operator(e, 0.5), 0.25) == noise_operator(e, 0.125);
  pass = pass && noise_exact;
  d << ", noise law " << (noise_exact ? "exact" : "violated");

  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  report(4, "Hermite stack", pass, dt, 5.0, d.str());
}

// 5. shift-expansion identity with the fault-injection self-test
void criterion_5() {
  auto t0 = Clock::now();
  auto good = expansion_identity_check(kDefaultSuiteSeed, 50, 1e-8);
  auto bad = expansion_identity_check(kDefaultSuiteSeed, 50, 1e-8, 1e-3);
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = good.pass && !bad.pass;
  std::ostringstream d;
  d << "max rel err " << good.max_rel_err << "; corrupted run fails: " << (!bad.pass ? "yes" : "no");
  report(5, "shift-expansion identity", pass, dt, 10.0, d.str());
}

// 6. hypercontractivity and the anti-concentration / perturbation /
//    gradient-growth suites at the pinned test constants
void criterion_6() {
  auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream d;

  auto hc = hypercontractivity_check(kDefaultSuiteSeed, 10, 100000);
  pass = pass && hc.pass;
  d << "hc margin " << hc.worst_margin;

  bool ac_ok = true;
  for (uint32_t deg : {1u, 2u, 3u}) {
    auto ac = anti_concentration_test(deg, 0.01, 100000, 20, 5.0, 2);
    ac_ok = ac_ok && ac.pass;
  }
  pass = pass && ac_ok;
  d << ", anticonc(c=5) " << (ac_ok ? "pass" : "fail");

  auto gg1 = gradient_growth_check(kDefaultSuiteSeed, 3, 0.05, 10.0, 2, 10000);
  auto gg2 = gradient_growth_check(kDefaultSuiteSeed ^ 0x2717, 2, 0.02, 10.0, 2, 10000);
  pass = pass && gg1.pass && gg2.pass;
  d << ", grad-growth(c=10) rates " << gg1.rate << "/" << gg2.rate;

  auto p2 = perturbation_check(kDefaultSuiteSeed, 2, 4, 1000, 2.0, 1e-3, 8.0);
  auto p3 = perturbation_check(kDefaultSuiteSeed ^ 0x5b5b, 3, 4, 1000, 2.0, 1e-3, 8.0);
  pass = pass && p2.pass && p3.pass;
  d << ", perturb(c=8) ratios " << p2.worst_ratio << "/" << p3.worst_ratio;

  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  report(6, "hc + lemma suites", pass, dt, 60.0, d.str());
}

// 7. end-to-end fooling gap at desk scale with the under-independence control
void criterion_7() {
  auto t0 = Clock::now();
  auto params = derive_params(2, 2, 0.1, 4, PrgOverrides{.R = 8, .L = 64, .M = 24});
  PtfFunction family = random_family(10, 4, 2, 2, true);
  auto master = bytes_from_hex("a1b2c3d4e5f60718");
  auto rep = fooling_gap(family, params, 200000, master);

  auto bad_params = derive_params(2, 2, 0.1, 4, PrgOverrides{.R = 8, .L = 64, .M = 24, .wiseness = 1});
  PtfFunction control = axis_intersection_family(4, 2);
  auto neg = fooling_gap(control, bad_params, 50000, master);

  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = rep.gap <= 0.02 && neg.gap > 0.05;
  std::ostringstream d;
  d << "gap " << rep.gap << " <= 0.02; wiseness-1 control gap " << neg.gap << " > 0.05";
  report(7, "end-to-end fooling gap", pass, dt, 300.0, d.str());
}

// 8. seed-length accounting: closed form and bounded ratio to the asymptotic
void criterion_8() {
  auto t0 = Clock::now();
  bool exact = true;
  double worst = 0.0;
  for (uint32_t k : {1u, 2u, 4u}) {
    for (uint32_t d : {1u, 2u, 4u}) {
      for (double eps : {0.5, 0.1}) {
        for (uint32_t n : {4u, 64u}) {
          auto p = derive_params(k, d, eps, n);
          exact = exact && seed_length_bits(p) ==
                               p.L * 2 * (2 * uint64_t{d} * p.R) * static_cast<uint64_t>(p.field_bit_width);
          double denom = std::pow(k, 5) * std::pow(d, 11) / (eps * eps) *
                         std::log2(static_cast<double>(k) * d * n / eps);
          worst = std::max(worst, static_cast<double>(seed_length_bits(p)) / denom);
        }
      }
    }
  }
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = exact && worst <= 65536.0;
  std::ostringstream d;
  d << "closed form " << (exact ? "exact" : "broken") << ", worst ratio " << worst << " <= 65536";
  report(8, "seed-length accounting", pass, dt, 1.0, d.str());
}

// 9. byte-identical reports across reruns and thread counts
void criterion_9() {
  auto t0 = Clock::now();
  std::string seed_hex(2 * 29184, 'c');  // enough for R=8 L=64 M=24 at d=2
  std::string gen_cmd = g_cli + " gen --k 2 --d 2 --eps 0.1 --n 4 --override-R 8 --override-L 64" +
                        " --override-M 24 --seed-hex " + seed_hex;
  auto g1 = shell("GAUSSPRG_THREADS=1 " + gen_cmd);
  auto g1b = shell("GAUSSPRG_THREADS=1 " + gen_cmd);
  auto g8 = shell("GAUSSPRG_THREADS=8 " + gen_cmd);

  std::string fool_cmd = g_cli + " fool --k 2 --d 2 --eps 0.1 --n 4 --override-R 8 --override-L 64" +
                         " --override-M 24 --N 4000 --master-seed a1b2c3d4 --family-seed 10";
  auto f1 = shell("GAUSSPRG_THREADS=1 " + fool_cmd);
  auto f1b = shell("GAUSSPRG_THREADS=1 " + fool_cmd);
  auto f8 = shell("GAUSSPRG_THREADS=8 " + fool_cmd);

  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = g1.exit_code == 0 && f1.exit_code == 0 && !g1.out.empty() && !f1.out.empty() &&
              g1.out == g1b.out && g1.out == g8.out && f1.out == f1b.out && f1.out == f8.out;
  std::ostringstream d;
  d << "gen " << (g1.out == g8.out ? "stable" : "differs") << ", fool "
    << (f1.out == f8.out ? "stable" : "differs") << " across threads {1,8}";
  report(9, "report determinism", pass, dt, 60.0, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-gaussprg>\n";
    return 2;
  }
  g_cli = argv[1];
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
