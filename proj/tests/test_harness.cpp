#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "gaussprg/harness.hpp"
#include "support/oracles.hpp"

using namespace gaussprg;

namespace {

PtfFunction halfspace_family(double shift) {
  // sign(x1 - shift), identity combiner
  PtfFunction f;
  MonomialPoly p(1);
  p.add_term(MultiIndex::unit(0), 1.0);
  p.add_term(MultiIndex{}, -shift);
  f.polys.push_back(std::move(p));
  f.combiner = {0, 1};
  return f;
}

}  // namespace

TEST_CASE("hoeffding half width follows the square-root law") {
  double hw1 = hoeffding_half_width(40000);
  double hw2 = hoeffding_half_width(10000);
  CHECK(hw2 == doctest::Approx(2.0 * hw1).epsilon(1e-12));
  CHECK(hw1 == doctest::Approx(std::sqrt(std::log(2.0 / 0.01) / (2.0 * 40000))).epsilon(1e-12));
}

TEST_CASE("estimate_mean on constant and threshold families") {
  auto master = bytes_from_hex("beef");

  PtfFunction ones = halfspace_family(0.0);
  ones.combiner = {1, 1};  // F == 1
  auto est = estimate_mean(ones, gaussian_arm_sampler(1, master), 5000);
  CHECK(est.mean == 1.0);

  auto sym = estimate_mean(halfspace_family(0.0), gaussian_arm_sampler(1, master), 100000);
  CHECK(std::abs(sym.mean - 0.5) < 0.01);

  // Pr[x1 >= 1] = 1 - Phi(1) by the normal CDF oracle
  double expect = 1.0 - oracles::normal_cdf(1.0);
  auto tail = estimate_mean(halfspace_family(1.0), gaussian_arm_sampler(1, master), 100000);
  CHECK(std::abs(tail.mean - expect) < 0.01);

  CHECK_THROWS_AS(estimate_mean(ones, gaussian_arm_sampler(1, master), 50), std::invalid_argument);
}

TEST_CASE("hoeffding interval calibration for a fair coin") {
  // meta-test: the 99% interval covers 0.5 in at least 99% of 1000 repetitions
  std::mt19937_64 eng(0xca11b8);
  const int reps = 1000, N = 2000;
  double hw = hoeffding_half_width(N);
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    int ones = 0;
    for (int i = 0; i < N; ++i) ones += static_cast<int>(eng() & 1);
    double mean = static_cast<double>(ones) / N;
    if (std::abs(mean - 0.5) <= hw) ++covered;
  }
  CHECK(covered >= 990);
}

TEST_CASE("independence verdicts") {
  auto pass5 = exhaustive_independence_test(5, 2, 2, {0, 1, 2});
  CHECK(pass5.pass);
  auto pass13 = exhaustive_independence_test(13, 3, 3, {0, 1, 2, 3, 4, 5});
  CHECK(pass13.pass);
  // negative control: a pairwise source is not 3-wise uniform
  auto fail = exhaustive_independence_test(13, 2, 3, {0, 1, 2});
  CHECK_FALSE(fail.pass);
  CHECK(!fail.detail.empty());

  CHECK_THROWS_AS(exhaustive_independence_test(12, 2, 2, {0, 1}), std::invalid_argument);  // not prime
  CHECK_THROWS_AS(exhaustive_independence_test(13, 2, 2, {0, 0}), std::invalid_argument);  // dup index
  CHECK_THROWS_WITH_AS(exhaustive_independence_test(101, 4, 4, {0, 1, 2, 3}).pass,
                       doctest::Contains("too large"), std::invalid_argument);
}

TEST_CASE("coupling verdicts across grid precisions") {
  double delta = std::exp2(-7);
  auto fine = coupling_test(16, delta, 100000, 0x5eed);
  CHECK(fine.pass);
  CHECK(fine.rate >= fine.threshold);

  auto coarse = coupling_test(2, delta, 100000, 0x5eed);
  CHECK_FALSE(coarse.pass);

  auto exact = coupling_test(53, delta, 10000, 0x5eed);
  CHECK(exact.rate == 1.0);
}

TEST_CASE("anti-concentration suite") {
  // p = h1 = y itself: Pr[|y| <= 0.01] ~ 0.008 <= 0.01, the c = 1, d = 1 bound
  double small_ball = oracles::normal_cdf(0.01) - oracles::normal_cdf(-0.01);
  CHECK(small_ball <= 0.01);
  auto tight = anti_concentration_test(1, 0.01, 100000, 5, 1.0, 1);
  CHECK(tight.pass);

  // eps -> 1: the bound exceeds 1, trivial pass
  auto trivial = anti_concentration_test(2, 0.9, 1000, 2, 5.0, 2);
  CHECK(trivial.bound > 1.0);
  CHECK(trivial.pass);

  auto quadratic = anti_concentration_test(2, 0.01, 100000, 20, 5.0, 2);
  CHECK(quadratic.pass);
}

TEST_CASE("lemma suite passes end to end and catches injected faults") {
  auto rep = lemma_suite();
  CHECK(rep.all_pass);
  REQUIRE(rep.checks.size() >= 8);
  for (const auto& check : rep.checks) {
    INFO(check.name);
    CHECK(check.pass);
  }

  // the corrupted expansion must fail
  auto bad = expansion_identity_check(kDefaultSuiteSeed, 50, 1e-8, 1e-3);
  CHECK_FALSE(bad.pass);
  auto good = expansion_identity_check(kDefaultSuiteSeed, 50, 1e-8);
  CHECK(good.pass);
  CHECK(good.max_rel_err <= 1e-8);
}

TEST_CASE("fooling gap on the all-zeros combiner is exactly zero") {
  auto params = derive_params(2, 2, 0.1, 4, PrgOverrides{.R = 2, .L = 4, .M = 16});
  PtfFunction zero = axis_intersection_family(4, 2);
  zero.combiner.assign(4, 0);
  auto rep = fooling_gap(zero, params, 1000, bytes_from_hex("0a0b"));
  CHECK(rep.gap == 0.0);
  CHECK(rep.pass);
  CHECK(rep.gap_bound == doctest::Approx(2 * hoeffding_half_width(1000)));
}

TEST_CASE("under-independent source shows a detectable gap") {
  // wiseness 1 collapses every coordinate to one value; the intersection of
  // two axis halfspaces then reads 1/2 instead of 1/4
  auto params = derive_params(2, 2, 0.1, 4, PrgOverrides{.R = 8, .L = 16, .M = 16, .wiseness = 1});
  PtfFunction ctrl = axis_intersection_family(4, 2);
  auto rep = fooling_gap(ctrl, params, 20000, bytes_from_hex("1badb002"));
  CHECK(rep.gap > 0.1);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("estimate_mean is thread-count invariant") {
  auto master = bytes_from_hex("c1c2");
  PtfFunction f = random_family(3, 2, 2, 2, true);
  setenv("GAUSSPRG_THREADS", "1", 1);
  auto serial = estimate_mean(f, gaussian_arm_sampler(2, master), 30000);
  setenv("GAUSSPRG_THREADS", "3", 1);
  auto parallel = estimate_mean(f, gaussian_arm_sampler(2, master), 30000);
  unsetenv("GAUSSPRG_THREADS");
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.half_width == parallel.half_width);
}

TEST_CASE("fooling gap report is reproducible") {
  auto params = derive_params(1, 1, 0.25, 2, PrgOverrides{.R = 2, .L = 4, .M = 16});
  PtfFunction f = halfspace_family(0.5);
  PtfFunction f2(f);
  // widen to dimension 2
  MonomialPoly p(2);
  p.add_term(MultiIndex::unit(0), 1.0);
  p.add_term(MultiIndex{}, -0.5);
  f2.polys[0] = p;
  auto master = bytes_from_hex("77553311");
  auto a = fooling_gap(f2, params, 2000, master);
  auto b = fooling_gap(f2, params, 2000, master);
  CHECK(a.prg_estimate.mean == b.prg_estimate.mean);
  CHECK(a.gaussian_estimate.mean == b.gaussian_estimate.mean);
  CHECK(a.family_digest == b.family_digest);
}
