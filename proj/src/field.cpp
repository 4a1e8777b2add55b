#include "gaussprg/field.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace gaussprg {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t acc = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) acc = mul_mod(acc, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // These witnesses decide primality for all n < 3.3 * 10^24.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t min_prime_at_least(uint64_t lo) {
  if (lo <= 2) return 2;
  uint64_t n = lo | 1;  // first odd >= lo
  for (;; n += 2) {
    if (n < lo) throw std::overflow_error("min_prime_at_least: search overflowed 64 bits");
    if (is_prime(n)) return n;
  }
}

int ceil_log2(uint64_t n) {
  if (n <= 1) return 0;
  return 64 - std::countl_zero(n - 1);
}

PrimeField::PrimeField(uint64_t p) : modulus(p), bit_width(ceil_log2(p)) {
  if (!is_prime(p)) throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) + " is not prime");
  barrett_m = static_cast<uint64_t>((static_cast<unsigned __int128>(1) << 64) / p);
}

// ---- SeedStream ----

namespace {

inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> ((64 - k) & 63)); }

// splitmix64 finalizer; has no additive constant, so mix_final(0) == 0
inline uint64_t mix_final(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// full splitmix64 of a counter (constants allowed here: the result only
// ever multiplies or rotates state words)
inline uint64_t counter_hash(uint64_t c) { return mix_final((c + 1) * 0x9e3779b97f4a7c15ull); }

inline void diffuse(std::array<uint64_t, 4>& s) {
  // xor/rotate only: GF(2)-linear, zero state stays zero
  s[0] ^= rotl64(s[1], 13);
  s[2] ^= rotl64(s[3], 29);
  s[1] ^= rotl64(s[2], 31);
  s[3] ^= rotl64(s[0], 11);
  s[0] ^= rotl64(s[2], 43);
  s[1] ^= rotl64(s[3], 17);
}

}  // namespace

SeedStream::SeedStream(std::span<const std::byte> seed_bytes) {
  state_ = {0, 0, 0, 0};
  size_t pos = 0;
  while (pos < seed_bytes.size()) {
    for (int lane = 0; lane < 4 && pos < seed_bytes.size(); ++lane) {
      uint64_t w = 0;
      for (int b = 0; b < 8 && pos < seed_bytes.size(); ++b, ++pos) {
        w |= static_cast<uint64_t>(std::to_integer<uint8_t>(seed_bytes[pos])) << (8 * b);
      }
      state_[lane] ^= w;
    }
    diffuse(state_);
    diffuse(state_);
  }
  diffuse(state_);
  diffuse(state_);
}

uint64_t SeedStream::word(uint32_t stream_id, uint32_t index) const {
  uint64_t c = (static_cast<uint64_t>(stream_id) << 32) | index;
  uint64_t a = counter_hash(c) | 1;
  uint64_t b = counter_hash(c ^ 0xd6e8feb86659fd93ull) | 1;
  int r1 = static_cast<int>(a >> 58);
  int r2 = static_cast<int>(b >> 58);
  uint64_t z = (state_[0] ^ rotl64(state_[1], r1)) * a + (state_[2] ^ rotl64(state_[3], r2)) * b;
  return mix_final(z);
}

uint64_t SeedStream::field_element(uint32_t stream_id, uint32_t coeff_index, const PrimeField& field) const {
  unsigned __int128 wide = (static_cast<unsigned __int128>(word(stream_id, 2 * coeff_index)) << 64) |
                           word(stream_id, 2 * coeff_index + 1);
  return static_cast<uint64_t>(wide % field.modulus);
}

std::string SeedStream::digest_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (uint64_t w : state_) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(digits[(w >> shift) & 0xf]);
  }
  return out;
}

// ---- sources ----

double GridValue::value() const { return std::ldexp(static_cast<double>(numerator), -precision); }

KWisePolySource derive_source(const SeedStream& stream, size_t seed_bits, uint32_t t,
                              uint32_t stream_id, const PrimeField& field) {
  if (t < 1) throw std::invalid_argument("derive_source: wiseness must be >= 1");
  if (seed_bits < static_cast<size_t>(t) * static_cast<size_t>(field.bit_width)) {
    throw std::invalid_argument("derive_source: insufficient seed entropy (" + std::to_string(seed_bits) +
                                " bits < " + std::to_string(t) + " * " + std::to_string(field.bit_width) + ")");
  }
  KWisePolySource src;
  src.field = field;
  src.wiseness = t;
  src.stream_id = stream_id;
  src.coeffs.resize(t);
  for (uint32_t i = 0; i < t; ++i) src.coeffs[i] = stream.field_element(stream_id, i, field);
  return src;
}

KWisePolySource derive_source(std::span<const std::byte> seed_bytes, uint32_t t,
                              uint32_t stream_id, const PrimeField& field) {
  SeedStream stream(seed_bytes);
  return derive_source(stream, seed_bytes.size() * 8, t, stream_id, field);
}

uint64_t eval_index(const KWisePolySource& src, uint64_t j) {
  uint64_t p = src.field.modulus;
  if (j >= p) {
    throw std::out_of_range("eval_index: index " + std::to_string(j) + " exceeds field modulus " +
                            std::to_string(p));
  }
  uint64_t acc = 0;
  // Horner steps stay below 2^64 whenever (p-1)*(j+1) does; coordinate
  // indices are tiny compared to the modulus, so this is the usual path
  if (j == 0) return src.coeffs.empty() ? 0 : src.coeffs[0] % p;
  if (j + 1 <= UINT64_MAX / (p - 1)) {
    for (size_t i = src.coeffs.size(); i-- > 0;) {
      acc = src.field.reduce(acc * j + src.coeffs[i]);
    }
    return acc;
  }
  for (size_t i = src.coeffs.size(); i-- > 0;) {
    acc = (mul_mod(acc, j, p) + src.coeffs[i]) % p;
  }
  return acc;
}

GridValue to_grid(uint64_t elem, int precision_bits) {
  if (precision_bits < 1 || precision_bits > 62) {
    throw std::invalid_argument("to_grid: precision must be in [1, 62]");
  }
  uint64_t mask = (uint64_t{1} << precision_bits) - 1;
  return GridValue{(elem & mask) + 1, precision_bits};
}

std::vector<std::byte> bytes_from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument(std::string("invalid hex character '") + c + "'");
  };
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string must have even length");
  std::vector<std::byte> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::byte>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

std::string hex_from_bytes(std::span<const std::byte> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::byte b : bytes) {
    uint8_t v = std::to_integer<uint8_t>(b);
    out.push_back(digits[v >> 4]);
    out.push_back(digits[v & 0xf]);
  }
  return out;
}

}  // namespace gaussprg
