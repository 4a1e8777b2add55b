#include "gaussprg/mollifier.hpp"

#include <cmath>
#include <stdexcept>

namespace gaussprg {

double psi(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 / (x * x - 1.0));
}

double rho(double x) {
  if (x >= 1.0) return 1.0;
  if (x <= 0.0) return 0.0;
  return std::exp(1.0 + 1.0 / ((x - 1.0) * (x - 1.0) - 1.0));
}

std::vector<MollifierFactor> mollifier_factors(const MollifierConfig& cfg, std::span<const double> x) {
  if (cfg.family == nullptr) throw std::invalid_argument("mollifier: family not set");
  if (!(cfg.eps > 0.0) || cfg.eps >= 1.0) throw std::invalid_argument("mollifier: eps must lie in (0, 1)");
  const PtfFunction& f = *cfg.family;
  if (x.size() != f.dimension()) throw std::invalid_argument("mollifier: point dimension mismatch");

  double c = 16.0 * cfg.eps * cfg.eps;
  std::vector<MollifierFactor> out;
  for (uint32_t i = 0; i < f.k(); ++i) {
    const MonomialPoly& p = f.polys[i];
    uint32_t d = p.degree();
    std::vector<double> norms(d + 2, 0.0);
    for (uint32_t t = 0; t <= d + 1; ++t) norms[t] = gradient_norm(p, x, t);
    for (uint32_t t = 0; t < d; ++t) {
      MollifierFactor fac;
      fac.poly_index = i;
      fac.t = t;
      fac.grad_sq = norms[t] * norms[t];
      fac.grad_next_sq = norms[t + 1] * norms[t + 1];
      if (fac.grad_sq == 0.0) {
        // vacuous when the next norm vanishes too, dead otherwise
        fac.factor = fac.grad_next_sq == 0.0 ? 1.0 : 0.0;
      } else if (fac.grad_next_sq == 0.0) {
        fac.factor = 1.0;
      } else {
        fac.factor = rho(std::log(fac.grad_sq / (c * fac.grad_next_sq)));
      }
      out.push_back(fac);
    }
  }
  return out;
}

double mollifier_G(const MollifierConfig& cfg, std::span<const double> x) {
  double g = 1.0;
  for (const auto& fac : mollifier_factors(cfg, x)) {
    g *= fac.factor;
    if (g == 0.0) break;
  }
  return g;
}

namespace {

// t-th derivative by the order-t central difference on a staggered grid
template <typename F>
double central_diff(const F& f, double x, int t, double h) {
  double sum = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= t; ++i) {
    if (i > 0) binom = binom * static_cast<double>(t - i + 1) / static_cast<double>(i);
    double sign = ((t - i) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * f(x + (static_cast<double>(i) - t / 2.0) * h);
  }
  return sum / std::pow(h, t);
}

}  // namespace

DerivativeBoundReport derivative_bound_check(int t) {
  if (t < 1 || t > 4) throw std::invalid_argument("derivative_bound_check: t must lie in [1, 4]");
  const int kGridPoints = 1000;
  const double h = 1e-2;
  DerivativeBoundReport rep;
  rep.t = t;
  rep.bound = std::pow(static_cast<double>(t), 6.0 * t);
  for (int i = 0; i < kGridPoints; ++i) {
    double xp = -1.5 + 3.0 * (i + 0.5) / kGridPoints;
    rep.max_abs_psi = std::max(rep.max_abs_psi, std::abs(central_diff(psi, xp, t, h)));
    double xr = -0.25 + 1.5 * (i + 0.5) / kGridPoints;
    rep.max_abs_rho = std::max(rep.max_abs_rho, std::abs(central_diff(rho, xr, t, h)));
  }
  rep.pass = rep.max_abs_psi <= rep.bound && rep.max_abs_rho <= rep.bound;
  return rep;
}

}  // namespace gaussprg
