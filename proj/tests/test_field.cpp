#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "gaussprg/field.hpp"

using namespace gaussprg;

TEST_CASE("primality and prime search") {
  CHECK(is_prime(2));
  CHECK(is_prime(13));
  CHECK(is_prime(257));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));         // Carmichael
  CHECK_FALSE(is_prime(6700417ull * 6700417ull));
  CHECK(is_prime((uint64_t{1} << 61) - 1));  // Mersenne

  // independent oracle for the smallest prime >= 2^40: trial division over the
  // whole gap, no Miller-Rabin involved
  uint64_t lo = uint64_t{1} << 40;
  uint64_t p = min_prime_at_least(lo);
  auto divides = [](uint64_t n) {
    for (uint64_t q = 3; q * q <= n; q += 2) {
      if (n % q == 0) return true;
    }
    return (n & 1) == 0;
  };
  CHECK_FALSE(divides(p));
  for (uint64_t n = lo; n < p; ++n) CHECK(divides(n));
  CHECK(p == 1099511627791ull);
  CHECK(ceil_log2(p) == 41);
}

TEST_CASE("PrimeField validation and reduction") {
  CHECK_THROWS_AS(PrimeField(15), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(0), std::invalid_argument);
  PrimeField f(13);
  CHECK(f.bit_width == 4);
  for (uint64_t x : {0ull, 1ull, 12ull, 13ull, 14ull, 169ull, 0xffffffffffffffffull}) {
    CHECK(f.reduce(x) == x % 13);
  }
  PrimeField big(min_prime_at_least(uint64_t{1} << 56));
  std::mt19937_64 eng(7);
  for (int i = 0; i < 1000; ++i) {
    uint64_t x = eng();
    CHECK(big.reduce(x) == x % big.modulus);
  }
}

TEST_CASE("eval_index basics") {
  PrimeField f7(7);
  KWisePolySource src{f7, 2, {1, 1}, 0};
  CHECK(eval_index(src, 3) == 4);  // 1 + 3 mod 7
  KWisePolySource zero{f7, 3, {0, 0, 0}, 0};
  for (uint64_t j = 0; j < 7; ++j) CHECK(eval_index(zero, j) == 0);
  CHECK_THROWS_AS(eval_index(src, 7), std::out_of_range);
  // fast and wide paths agree
  PrimeField f13(13);
  KWisePolySource s2{f13, 3, {5, 11, 7}, 0};
  for (uint64_t j = 0; j < 13; ++j) {
    uint64_t expect = (5 + 11 * j + 7 * j * j) % 13;
    CHECK(eval_index(s2, j) == expect);
  }
}

TEST_CASE("exhaustive t-wise uniformity on tiny fields") {
  // p <= 17, t <= 3: every t-subset of indices is exactly jointly uniform
  for (uint64_t p : {5ull, 7ull}) {
    PrimeField field(p);
    const uint32_t t = 2;
    std::vector<uint64_t> indices{0, 1, 3};
    uint64_t tuples = p * p;
    for (size_t a = 0; a < indices.size(); ++a) {
      for (size_t b = a + 1; b < indices.size(); ++b) {
        std::map<std::pair<uint64_t, uint64_t>, uint64_t> hist;
        KWisePolySource src{field, t, {0, 0}, 0};
        for (uint64_t c0 = 0; c0 < p; ++c0) {
          for (uint64_t c1 = 0; c1 < p; ++c1) {
            src.coeffs = {c0, c1};
            ++hist[{eval_index(src, indices[a]), eval_index(src, indices[b])}];
          }
        }
        CHECK(hist.size() == tuples);
        for (const auto& [key, count] : hist) CHECK(count == 1);
      }
    }
  }
}

TEST_CASE("derive_source determinism and stream separation") {
  PrimeField field(min_prime_at_least(uint64_t{1} << 40));
  std::vector<std::byte> seed(64);
  std::mt19937_64 eng(0xdead5eed);
  for (auto& b : seed) b = static_cast<std::byte>(eng() & 0xff);

  auto a = derive_source(seed, 4, 3, field);
  auto b = derive_source(seed, 4, 3, field);
  CHECK(a == b);
  CHECK(a.coeffs.size() == 4);
  for (uint64_t c : a.coeffs) CHECK(c < field.modulus);

  // all-zero seed: the linear expansion keeps the zero polynomial
  std::vector<std::byte> zero(64, std::byte{0});
  auto z = derive_source(zero, 2, 0, field);
  CHECK(z.coeffs == std::vector<uint64_t>{0, 0});

  // stream 0 vs 1 never collide over 1000 random seeds
  int collisions = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    for (auto& byte : seed) byte = static_cast<std::byte>(eng() & 0xff);
    SeedStream stream(seed);
    auto s0 = derive_source(stream, seed.size() * 8, 3, 0, field);
    auto s1 = derive_source(stream, seed.size() * 8, 3, 1, field);
    if (s0.coeffs == s1.coeffs) ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("derive_source rejects short seeds") {
  PrimeField field(min_prime_at_least(uint64_t{1} << 40));  // bit width 41
  std::vector<std::byte> tiny(10);                          // 80 bits < 3 * 41
  CHECK_THROWS_WITH_AS(derive_source(tiny, 3, 0, field).coeffs.size(),
                       doctest::Contains("insufficient seed entropy"), std::invalid_argument);
  std::vector<std::byte> enough(16);  // 128 bits >= 123
  CHECK_NOTHROW(derive_source(enough, 3, 0, field));
}

TEST_CASE("to_grid mapping and exact bias count") {
  CHECK(to_grid(0, 8).numerator == 1);
  CHECK(to_grid(255, 8).numerator == 256);
  CHECK(to_grid(255, 8).value() == 1.0);
  CHECK(to_grid(256, 8).numerator == 1);  // wraps mod 2^M
  CHECK_THROWS_AS(to_grid(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(to_grid(0, 63), std::invalid_argument);

  // p = 257, M = 4: cells hold 16 or 17 of the 257 field elements
  std::vector<int> hist(16, 0);
  for (uint64_t e = 0; e < 257; ++e) ++hist[to_grid(e, 4).numerator - 1];
  int lo = hist[0], hi = hist[0];
  for (int c : hist) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi == 17);
  CHECK(lo == 16);
  CHECK(hi - lo <= 1);  // max - min cell probability <= 1/p exactly
}

TEST_CASE("grid values are never zero") {
  for (int M : {1, 4, 24, 53}) {
    CHECK(to_grid(0, M).value() > 0.0);
    CHECK(to_grid(uint64_t(-1), M).value() <= 1.0);
  }
}

TEST_CASE("hex helpers round-trip") {
  auto bytes = bytes_from_hex("00ff10ab");
  CHECK(bytes.size() == 4);
  CHECK(hex_from_bytes(bytes) == "00ff10ab");
  CHECK_THROWS_AS(bytes_from_hex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(bytes_from_hex("zz"), std::invalid_argument);
}
