#include "gaussprg/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gaussprg {

// ---- MultiIndex ----

MultiIndex::MultiIndex(std::initializer_list<Entry> entries) : entries_(entries) { normalize(); }
MultiIndex::MultiIndex(std::vector<Entry> entries) : entries_(std::move(entries)) { normalize(); }

MultiIndex MultiIndex::unit(uint32_t coord, uint32_t exponent) {
  if (exponent == 0) return {};
  return MultiIndex{{coord, exponent}};
}

void MultiIndex::normalize() {
  std::sort(entries_.begin(), entries_.end());
  std::vector<Entry> merged;
  for (const auto& [coord, exp] : entries_) {
    if (exp == 0) continue;
    if (!merged.empty() && merged.back().first == coord) {
      merged.back().second += exp;
    } else {
      merged.emplace_back(coord, exp);
    }
  }
  entries_ = std::move(merged);
}

uint32_t MultiIndex::order() const {
  uint32_t total = 0;
  for (const auto& [coord, exp] : entries_) total += exp;
  return total;
}

uint32_t MultiIndex::exponent(uint32_t coord) const {
  for (const auto& [c, e] : entries_) {
    if (c == coord) return e;
  }
  return 0;
}

uint32_t MultiIndex::max_coordinate() const {
  if (entries_.empty()) throw std::logic_error("max_coordinate of the zero multi-index");
  return entries_.back().first;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (const auto& [coord, exp] : entries_) f *= gaussprg::factorial(exp);
  return f;
}

// ---- polynomials ----

uint32_t MonomialPoly::degree() const {
  uint32_t d = 0;
  for (const auto& [idx, c] : terms_) d = std::max(d, idx.order());
  return d;
}

double MonomialPoly::coefficient(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? 0.0 : it->second;
}

void MonomialPoly::add_term(const MultiIndex& idx, double coeff) {
  if (coeff == 0.0) return;
  if (!idx.is_zero() && idx.max_coordinate() >= dimension_) {
    throw std::invalid_argument("term coordinate exceeds polynomial dimension");
  }
  double& slot = terms_[idx];
  slot += coeff;
  if (slot == 0.0) terms_.erase(idx);
}

uint32_t HermiteExpansion::degree() const {
  uint32_t d = 0;
  for (const auto& [idx, c] : coeffs_) d = std::max(d, idx.order());
  return d;
}

double HermiteExpansion::coefficient(const MultiIndex& idx) const {
  auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void HermiteExpansion::add_coeff(const MultiIndex& idx, double value) {
  if (value == 0.0) return;
  if (!idx.is_zero() && idx.max_coordinate() >= dimension_) {
    throw std::invalid_argument("coefficient coordinate exceeds expansion dimension");
  }
  double& slot = coeffs_[idx];
  slot += value;
  if (slot == 0.0) coeffs_.erase(idx);
}

// ---- univariate Hermite machinery ----

double factorial(uint32_t n) {
  double f = 1.0;
  for (uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

double sqrt_factorial(uint32_t n) { return std::sqrt(factorial(n)); }

double hermite_eval_1d(uint32_t order, double y) {
  // h_{j+1} = (y h_j - sqrt(j) h_{j-1}) / sqrt(j+1)
  double prev = 0.0;
  double cur = 1.0;
  for (uint32_t j = 0; j < order; ++j) {
    double next = (y * cur - std::sqrt(static_cast<double>(j)) * prev) / std::sqrt(static_cast<double>(j) + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {
constexpr uint32_t kMaxHermiteOrder = 20;  // integer tables stay in int64 range

void check_order(uint32_t j) {
  if (j > kMaxHermiteOrder) {
    throw std::invalid_argument("Hermite basis conversion limited to degree " +
                                std::to_string(kMaxHermiteOrder));
  }
}
}  // namespace

std::vector<int64_t> hermite_monomial_coeffs(uint32_t j) {
  check_order(j);
  // H_0 = 1, H_1 = x, H_{t+1} = x H_t - t H_{t-1}
  std::vector<int64_t> prev{1};
  if (j == 0) return prev;
  std::vector<int64_t> cur{0, 1};
  for (uint32_t t = 1; t < j; ++t) {
    std::vector<int64_t> next(t + 2, 0);
    for (uint32_t m = 0; m <= t; ++m) next[m + 1] += cur[m];
    for (uint32_t m = 0; m + 1 <= t; ++m) next[m] -= static_cast<int64_t>(t) * prev[m];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<int64_t> monomial_hermite_coeffs(uint32_t m) {
  check_order(m);
  // x^m = sum_i g[m - 2i] H_{m-2i} with g ratios integral when the full
  // product is divided at once
  std::vector<int64_t> g(m + 1, 0);
  int64_t val = 1;
  g[m] = 1;
  for (uint32_t i = 0; 2 * (i + 1) <= m; ++i) {
    uint32_t r = m - 2 * i;  // current order
    val = val * r * (r - 1) / (2 * (i + 1));
    g[r - 2] = val;
  }
  return g;
}

// ---- evaluation ----

double eval(const MonomialPoly& p, std::span<const double> x) {
  if (x.size() != p.dimension()) {
    throw std::invalid_argument("eval: point dimension " + std::to_string(x.size()) +
                                " != polynomial dimension " + std::to_string(p.dimension()));
  }
  double total = 0.0;
  for (const auto& [idx, c] : p.terms()) {
    double term = c;
    for (const auto& [coord, exp] : idx.entries()) {
      double base = x[coord];
      for (uint32_t e = 0; e < exp; ++e) term *= base;
    }
    total += term;
  }
  return total;
}

double hermite_eval(const MultiIndex& alpha, std::span<const double> y) {
  if (!alpha.is_zero() && alpha.max_coordinate() >= y.size()) {
    throw std::invalid_argument("hermite_eval: point has too few coordinates");
  }
  double prod = 1.0;
  for (const auto& [coord, exp] : alpha.entries()) prod *= hermite_eval_1d(exp, y[coord]);
  return prod;
}

double eval(const HermiteExpansion& e, std::span<const double> y) {
  if (y.size() != e.dimension()) {
    throw std::invalid_argument("eval: point dimension != expansion dimension");
  }
  double total = 0.0;
  for (const auto& [idx, c] : e.coeffs()) total += c * hermite_eval(idx, y);
  return total;
}

// ---- basis conversion ----

namespace {

// Walks the tensor product of per-coordinate basis-change lists.
// For each source entry (coord, exp) the table row gives the target orders
// and weights; contributions multiply across coordinates.
template <typename Row, typename Sink>
void tensor_expand(const std::vector<std::pair<uint32_t, Row>>& rows, size_t at,
                   std::vector<MultiIndex::Entry>& partial, double weight, const Sink& sink) {
  if (at == rows.size()) {
    sink(MultiIndex(partial), weight);
    return;
  }
  const auto& [coord, row] = rows[at];
  for (const auto& [order, w] : row) {
    if (order > 0) partial.emplace_back(coord, order);
    tensor_expand(rows, at + 1, partial, weight * w, sink);
    if (order > 0) partial.pop_back();
  }
}

using WeightRow = std::vector<std::pair<uint32_t, double>>;

}  // namespace

HermiteExpansion to_hermite(const MonomialPoly& p) {
  HermiteExpansion out(p.dimension());
  for (const auto& [beta, c] : p.terms()) {
    std::vector<std::pair<uint32_t, WeightRow>> rows;
    rows.reserve(beta.entries().size());
    for (const auto& [coord, m] : beta.entries()) {
      auto g = monomial_hermite_coeffs(m);
      WeightRow row;
      for (uint32_t j = 0; j < g.size(); ++j) {
        // x^m = sum g[j] H_j = sum g[j] sqrt(j!) h_j
        if (g[j] != 0) row.emplace_back(j, static_cast<double>(g[j]) * sqrt_factorial(j));
      }
      rows.emplace_back(coord, std::move(row));
    }
    std::vector<MultiIndex::Entry> partial;
    tensor_expand(rows, 0, partial, c,
                  [&](const MultiIndex& alpha, double w) { out.add_coeff(alpha, w); });
  }
  return out;
}

MonomialPoly from_hermite(const HermiteExpansion& e) {
  MonomialPoly out(e.dimension());
  for (const auto& [alpha, c] : e.coeffs()) {
    std::vector<std::pair<uint32_t, WeightRow>> rows;
    rows.reserve(alpha.entries().size());
    for (const auto& [coord, j] : alpha.entries()) {
      auto h = hermite_monomial_coeffs(j);
      double norm = 1.0 / sqrt_factorial(j);
      WeightRow row;
      for (uint32_t m = 0; m < h.size(); ++m) {
        if (h[m] != 0) row.emplace_back(m, static_cast<double>(h[m]) * norm);
      }
      rows.emplace_back(coord, std::move(row));
    }
    std::vector<MultiIndex::Entry> partial;
    tensor_expand(rows, 0, partial, c,
                  [&](const MultiIndex& beta, double w) { out.add_term(beta, w); });
  }
  return out;
}

// ---- norms and noise ----

double l2_norm(const HermiteExpansion& e) {
  double sum = 0.0;
  for (const auto& [idx, c] : e.coeffs()) sum += c * c;
  return std::sqrt(sum);
}

double l2_norm(const MonomialPoly& p) { return l2_norm(to_hermite(p)); }

namespace {
double pow_int(double base, uint32_t n) {
  double acc = 1.0;
  for (uint32_t i = 0; i < n; ++i) acc *= base;
  return acc;
}
}  // namespace

HermiteExpansion noise_operator(const HermiteExpansion& e, double rho) {
  if (rho < 0.0) throw std::domain_error("noise_operator: rho must be >= 0");
  HermiteExpansion out(e.dimension());
  for (const auto& [idx, c] : e.coeffs()) out.add_coeff(idx, c * pow_int(rho, idx.order()));
  return out;
}

// ---- differentiation ----

MonomialPoly partial_derivative(const MonomialPoly& p, const MultiIndex& alpha) {
  MonomialPoly out(p.dimension());
  for (const auto& [beta, c] : p.terms()) {
    double factor = c;
    std::vector<MultiIndex::Entry> rest;
    bool vanished = false;
    // falling factorial per coordinate; terms lacking the exponent vanish
    for (const auto& [coord, da] : alpha.entries()) {
      uint32_t be = beta.exponent(coord);
      if (be < da) {
        vanished = true;
        break;
      }
      for (uint32_t i = 0; i < da; ++i) factor *= static_cast<double>(be - i);
      if (be > da) rest.emplace_back(coord, be - da);
    }
    if (vanished) continue;
    for (const auto& [coord, e] : beta.entries()) {
      if (alpha.exponent(coord) == 0) rest.emplace_back(coord, e);
    }
    out.add_term(MultiIndex(std::move(rest)), factor);
  }
  return out;
}

std::vector<uint32_t> support_coordinates(const MonomialPoly& p) {
  std::vector<uint32_t> coords;
  for (const auto& [idx, c] : p.terms()) {
    for (const auto& [coord, e] : idx.entries()) coords.push_back(coord);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

namespace {
void compositions(std::span<const uint32_t> coords, size_t at, uint32_t remaining,
                  std::vector<MultiIndex::Entry>& partial,
                  const std::function<void(const MultiIndex&)>& visit) {
  if (at == coords.size()) {
    if (remaining == 0) visit(MultiIndex(partial));
    return;
  }
  if (at + 1 == coords.size()) {
    if (remaining > 0) partial.emplace_back(coords[at], remaining);
    visit(MultiIndex(partial));
    if (remaining > 0) partial.pop_back();
    return;
  }
  for (uint32_t e = 0; e <= remaining; ++e) {
    if (e > 0) partial.emplace_back(coords[at], e);
    compositions(coords, at + 1, remaining - e, partial, visit);
    if (e > 0) partial.pop_back();
  }
}
}  // namespace

void for_each_multi_index(std::span<const uint32_t> coords, uint32_t order,
                          const std::function<void(const MultiIndex&)>& visit) {
  if (order == 0) {
    visit(MultiIndex{});
    return;
  }
  if (coords.empty()) return;
  std::vector<MultiIndex::Entry> partial;
  compositions(coords, 0, order, partial, visit);
}

std::vector<std::pair<MultiIndex, MonomialPoly>> gradient_components(const MonomialPoly& p, uint32_t t) {
  std::vector<std::pair<MultiIndex, MonomialPoly>> out;
  if (t > p.degree()) return out;
  auto coords = support_coordinates(p);
  for_each_multi_index(coords, t, [&](const MultiIndex& alpha) {
    MonomialPoly d = partial_derivative(p, alpha);
    if (!d.terms().empty()) out.emplace_back(alpha, std::move(d));
  });
  return out;
}

double gradient_norm(const MonomialPoly& p, std::span<const double> x, uint32_t t) {
  if (t > p.degree()) return 0.0;
  double sum = 0.0;
  for (const auto& [alpha, d] : gradient_components(p, t)) {
    double v = eval(d, x);
    sum += v * v;
  }
  return std::sqrt(sum);
}

// ---- smoothing and the shift expansion ----

MonomialPoly scaled(const MonomialPoly& p, double c) {
  MonomialPoly out(p.dimension());
  for (const auto& [idx, coeff] : p.terms()) out.add_term(idx, coeff * c);
  return out;
}

MonomialPoly smooth(const MonomialPoly& p, double lambda) {
  if (lambda < 0.0 || lambda >= 1.0) throw std::domain_error("smooth: lambda must lie in [0, 1)");
  if (lambda == 0.0) return p;
  double shrink = std::sqrt(1.0 - lambda);
  HermiteExpansion damped = noise_operator(to_hermite(p), shrink);
  MonomialPoly q = from_hermite(damped);
  // q is a polynomial in z = x / sqrt(1 - lambda); substitute back
  MonomialPoly out(p.dimension());
  for (const auto& [beta, c] : q.terms()) {
    out.add_term(beta, c * pow_int(1.0 / shrink, beta.order()));
  }
  return out;
}

HermiteExpansion shift_expansion(const MonomialPoly& p, std::span<const double> x, double lambda) {
  if (x.size() != p.dimension()) {
    throw std::invalid_argument("shift_expansion: point dimension != polynomial dimension");
  }
  MonomialPoly phi = smooth(p, lambda);
  HermiteExpansion out(p.dimension());
  if (lambda == 0.0) {
    out.add_coeff(MultiIndex{}, eval(p, x));
    return out;
  }
  auto coords = support_coordinates(phi);
  uint32_t deg = phi.degree();
  for (uint32_t t = 0; t <= deg; ++t) {
    for_each_multi_index(coords, t, [&](const MultiIndex& alpha) {
      double d = eval(partial_derivative(phi, alpha), x);
      if (d == 0.0) return;
      double coeff = d * std::pow(lambda, alpha.order() / 2.0) / std::sqrt(alpha.factorial());
      out.add_coeff(alpha, coeff);
    });
  }
  return out;
}

MonomialPoly compose_affine(const MonomialPoly& p, std::span<const double> x, double s) {
  if (x.size() != p.dimension()) {
    throw std::invalid_argument("compose_affine: point dimension != polynomial dimension");
  }
  MonomialPoly out(p.dimension());
  // binomial expansion of prod_i (x_i + s y_i)^{beta_i}, term by term
  for (const auto& [beta, c] : p.terms()) {
    std::vector<std::pair<uint32_t, WeightRow>> rows;
    rows.reserve(beta.entries().size());
    for (const auto& [coord, m] : beta.entries()) {
      WeightRow row;
      double binom = 1.0;
      for (uint32_t a = 0; a <= m; ++a) {
        if (a > 0) binom = binom * static_cast<double>(m - a + 1) / static_cast<double>(a);
        row.emplace_back(a, binom * pow_int(x[coord], m - a) * pow_int(s, a));
      }
      rows.emplace_back(coord, std::move(row));
    }
    std::vector<MultiIndex::Entry> partial;
    tensor_expand(rows, 0, partial, c,
                  [&](const MultiIndex& gamma, double w) { out.add_term(gamma, w); });
  }
  return out;
}

}  // namespace gaussprg
