// Sparse multivariate polynomial algebra on Gaussian space: evaluation,
// symbolic differentiation, conversion between the monomial basis and the
// orthonormal (probabilists') Hermite basis, Gaussian L2 norms, the noise
// operator, Gaussian smoothing, and gradient-tensor norms.
#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace gaussprg {

/// Sparse exponent vector (alpha).  Entries are (coordinate, exponent) pairs
/// sorted by coordinate with exponents >= 1; the empty index is alpha = 0.
class MultiIndex {
 public:
  using Entry = std::pair<uint32_t, uint32_t>;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<Entry> entries);
  explicit MultiIndex(std::vector<Entry> entries);

  static MultiIndex unit(uint32_t coord, uint32_t exponent = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  uint32_t order() const;  // |alpha|
  uint32_t exponent(uint32_t coord) const;
  uint32_t max_coordinate() const;  // entries required; call only when !is_zero()
  double factorial() const;         // alpha!

  bool operator==(const MultiIndex&) const = default;
  bool operator<(const MultiIndex& other) const { return entries_ < other.entries_; }

 private:
  std::vector<Entry> entries_;
  void normalize();
};

/// Polynomial in the monomial basis: sparse map alpha -> coefficient.
class MonomialPoly {
 public:
  explicit MonomialPoly(uint32_t dimension = 0) : dimension_(dimension) {}

  uint32_t dimension() const { return dimension_; }
  uint32_t degree() const;
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  double coefficient(const MultiIndex& idx) const;

  /// Accumulates into the term, dropping coefficients that cancel to zero.
  void add_term(const MultiIndex& idx, double coeff);

  bool operator==(const MonomialPoly&) const = default;

 private:
  uint32_t dimension_;
  std::map<MultiIndex, double> terms_;
};

/// Polynomial in the orthonormal Hermite basis: sparse map alpha -> f_hat(alpha).
class HermiteExpansion {
 public:
  explicit HermiteExpansion(uint32_t dimension = 0) : dimension_(dimension) {}

  uint32_t dimension() const { return dimension_; }
  uint32_t degree() const;
  const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }
  double coefficient(const MultiIndex& idx) const;
  void add_coeff(const MultiIndex& idx, double value);

  bool operator==(const HermiteExpansion&) const = default;

 private:
  uint32_t dimension_;
  std::map<MultiIndex, double> coeffs_;
};

// ---- univariate Hermite machinery ----

double factorial(uint32_t n);
double sqrt_factorial(uint32_t n);

/// Normalized probabilists' Hermite value h_order(y) = H_order(y)/sqrt(order!),
/// by the stable three-term recurrence.
double hermite_eval_1d(uint32_t order, double y);

/// Integer coefficients of H_j in the monomial basis (index = power).
std::vector<int64_t> hermite_monomial_coeffs(uint32_t j);

/// Integer coefficients g with x^m = sum_j g[j] * H_j(x) (index = j).
std::vector<int64_t> monomial_hermite_coeffs(uint32_t m);

// ---- operations ----

double eval(const MonomialPoly& p, std::span<const double> x);
double hermite_eval(const MultiIndex& alpha, std::span<const double> y);
double eval(const HermiteExpansion& e, std::span<const double> y);

HermiteExpansion to_hermite(const MonomialPoly& p);
MonomialPoly from_hermite(const HermiteExpansion& e);

double l2_norm(const HermiteExpansion& e);
double l2_norm(const MonomialPoly& p);

HermiteExpansion noise_operator(const HermiteExpansion& e, double rho);

MonomialPoly partial_derivative(const MonomialPoly& p, const MultiIndex& alpha);

/// Coordinates that appear in at least one term.
std::vector<uint32_t> support_coordinates(const MonomialPoly& p);

/// Visits every multi-index of the given order supported on `coords`.
void for_each_multi_index(std::span<const uint32_t> coords, uint32_t order,
                          const std::function<void(const MultiIndex&)>& visit);

/// All order-t partial derivatives (one per multi-index, no multiplicities).
std::vector<std::pair<MultiIndex, MonomialPoly>> gradient_components(const MonomialPoly& p, uint32_t t);

/// sqrt(sum over |alpha| = t of (d^alpha p(x))^2); zero when t exceeds the degree.
double gradient_norm(const MonomialPoly& p, std::span<const double> x, uint32_t t);

/// phi with phi(x) = E_{y ~ N(0,1)^n}[p(x + sqrt(lambda) y)], computed through
/// the Hermite basis.  Requires 0 <= lambda < 1.
MonomialPoly smooth(const MonomialPoly& p, double lambda);

/// Expansion of p(x + sqrt(lambda) y) in Hermite basis over y: the h_alpha
/// coefficient is d^alpha phi(x) * lambda^(|alpha|/2) / sqrt(alpha!).
HermiteExpansion shift_expansion(const MonomialPoly& p, std::span<const double> x, double lambda);

/// p(x + s*y) as a polynomial in y.
MonomialPoly compose_affine(const MonomialPoly& p, std::span<const double> x, double s);

MonomialPoly scaled(const MonomialPoly& p, double c);

}  // namespace gaussprg
