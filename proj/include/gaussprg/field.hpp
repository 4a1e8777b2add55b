// Exactly t-wise independent uniform values on an M-bit grid, produced by
// degree-(t-1) polynomial evaluation over a prime field.  This is the
// randomness root of the whole construction: everything downstream is a
// deterministic function of a KWisePolySource.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gaussprg {

// ---- modular arithmetic on 64-bit operands ----

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

/// Deterministic Miller–Rabin, valid for all 64-bit inputs.
bool is_prime(uint64_t n);

/// Smallest prime >= lo.  Throws if the search would overflow 64 bits.
uint64_t min_prime_at_least(uint64_t lo);

/// ceil(log2 n) for n >= 1: number of bits needed to address [0, n).
int ceil_log2(uint64_t n);

struct PrimeField {
  uint64_t modulus = 0;
  int bit_width = 0;       // ceil(log2 modulus)
  uint64_t barrett_m = 0;  // floor(2^64 / modulus), for division-free reduction

  PrimeField() = default;
  explicit PrimeField(uint64_t p);  // throws std::invalid_argument if p is not prime

  /// x mod modulus for any x < 2^64, one multiply-high and two fixups.
  uint64_t reduce(uint64_t x) const {
    uint64_t q = static_cast<uint64_t>((static_cast<unsigned __int128>(x) * barrett_m) >> 64);
    uint64_t r = x - q * modulus;
    if (r >= modulus) r -= modulus;
    if (r >= modulus) r -= modulus;
    return r;
  }

  bool operator==(const PrimeField&) const = default;
};

// ---- seed expansion ----
//
// SeedStream is the fixed, documented extendable hash used to expand short
// seed material into per-source coefficient tuples.  The absorption phase is
// GF(2)-linear (xor/rotate only, no additive constants), so the all-zero seed
// expands to the all-zero stream and hence to zero coefficients: the
// degenerate zero-polynomial source.  The output phase whitens each word with
// counter-derived odd multipliers and a constant-free finalizer, preserving
// the zero fixed point.  Word (stream_id, i) reads position
// stream_id * 2^32 + i of one global stream, so distinct stream_ids consume
// disjoint slices.  No cryptographic claims are made.
class SeedStream {
 public:
  explicit SeedStream(std::span<const std::byte> seed_bytes);

  /// Word `index` of the slice belonging to `stream_id`.
  uint64_t word(uint32_t stream_id, uint32_t index) const;

  /// Field element: 128 output bits reduced mod p (bias < p * 2^-128).
  uint64_t field_element(uint32_t stream_id, uint32_t coeff_index, const PrimeField& field) const;

  /// Hex rendering of the 256-bit absorbed state; used as a seed digest.
  std::string digest_hex() const;

 private:
  std::array<uint64_t, 4> state_{};
};

// ---- the t-wise independent source ----

struct KWisePolySource {
  PrimeField field;
  uint32_t wiseness = 0;         // t
  std::vector<uint64_t> coeffs;  // length t, coefficient of j^i at index i
  uint32_t stream_id = 0;

  bool operator==(const KWisePolySource&) const = default;
};

/// A uniform grid point numerator * 2^-M with numerator in [1, 2^M];
/// strictly positive so that log(value) is always finite.
struct GridValue {
  uint64_t numerator = 1;
  int precision = 1;  // M

  double value() const;
};

/// Expands seed_bytes (domain-separated by stream_id) into a t-wise source.
/// Throws std::invalid_argument ("insufficient seed entropy") when the seed
/// carries fewer than t * field.bit_width bits.
KWisePolySource derive_source(std::span<const std::byte> seed_bytes, uint32_t t,
                              uint32_t stream_id, const PrimeField& field);

/// Same, from an already-absorbed stream; seed_bits is the bit length of the
/// original seed material (checked against t * field.bit_width).
KWisePolySource derive_source(const SeedStream& stream, size_t seed_bits, uint32_t t,
                              uint32_t stream_id, const PrimeField& field);

/// sum_i coeffs[i] * j^i mod p.  Throws std::out_of_range if j >= p.
uint64_t eval_index(const KWisePolySource& src, uint64_t j);

/// (elem mod 2^M) + 1, as a grid point in {2^-M, ..., 1}.  M in [1, 62].
GridValue to_grid(uint64_t elem, int precision_bits);

// hex helpers for seeds on the CLI
std::vector<std::byte> bytes_from_hex(const std::string& hex);
std::string hex_from_bytes(std::span<const std::byte> bytes);

}  // namespace gaussprg
