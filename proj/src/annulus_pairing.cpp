#include "lshape/annulus_pairing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "lshape/errors.hpp"
#include "lshape/parallel.hpp"
#include "lshape/quadrature.hpp"

namespace lshape {

using cplx = std::complex<double>;

RoundAnnulus::RoundAnnulus(double r0) : r0_(r0) {
  if (!(r0 > 1.0) || !std::isfinite(r0)) throw DomainError("round annulus requires 1 < r0 < inf");
}

LaurentDifferential::LaurentDifferential(std::map<int, cplx> coefficients) : coeffs_(std::move(coefficients)) {}

LaurentDifferential LaurentDifferential::monomial(int k, cplx c) { return LaurentDifferential({{k, c}}); }

cplx LaurentDifferential::coefficient(int k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

void LaurentDifferential::set(int k, cplx c) { coeffs_[k] = c; }

int LaurentDifferential::k_min() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }

int LaurentDifferential::k_max() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

cplx LaurentDifferential::operator()(cplx z) const {
  const double rho = std::abs(z);
  const double theta = std::arg(z);
  cplx sum = 0.0;
  for (const auto& [k, c] : coeffs_) sum += c * std::polar(std::pow(rho, k), k * theta);
  return sum;
}

void PolarQuadrature::validate() const {
  if (radial_panels == 0 || radial_order == 0) throw DomainError("polar quadrature needs radial nodes");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exact for every e^{i(k+2) theta} in the window.
std::size_t theta_count(const LaurentDifferential& d, const PolarQuadrature& cfg, std::size_t floor) {
  if (cfg.theta_points > 0) return cfg.theta_points;
  const int span = std::max(std::abs(d.k_min() + 2), std::abs(d.k_max() + 2));
  return std::max<std::size_t>(floor, 2 * static_cast<std::size_t>(span) + 8);
}

// Trapezoid sum of z^2 f(z) over |z| = rho.
cplx circle_sum(const LaurentDifferential& d, double rho, std::size_t n) {
  cplx sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    const cplx z = std::polar(rho, theta);
    sum += z * z * d(z);
  }
  return sum * (kTwoPi / static_cast<double>(n));
}

// Gauss-Legendre nodes in rho on geometrically spaced panels of [1/r0, r0].
Rule radial_rule(const RoundAnnulus& ann, const PolarQuadrature& cfg) {
  cfg.validate();
  const Rule base = gauss_legendre(cfg.radial_order);
  Rule rule;
  const double step = 2.0 * std::log(ann.r0()) / static_cast<double>(cfg.radial_panels);
  for (std::size_t p = 0; p < cfg.radial_panels; ++p) {
    const double lo = ann.inner() * std::exp(step * static_cast<double>(p));
    const double hi = p + 1 == cfg.radial_panels ? ann.outer() : ann.inner() * std::exp(step * static_cast<double>(p + 1));
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < base.size(); ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace

cplx pair_mu_phi(const RoundAnnulus& ann, const LaurentDifferential& d, const PolarQuadrature& cfg) {
  const Rule radial = radial_rule(ann, cfg);
  const std::size_t n = theta_count(d, cfg, 16);
  // (z^2/|z|^2) f(z) rho = z^2 f(z) / rho.
  cplx sum = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.nodes[i];
    sum += radial.weights[i] * circle_sum(d, rho, n) / rho;
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) throw QuadratureError("pairing is not finite");
  return sum;
}

cplx angular_average(const RoundAnnulus& ann, const LaurentDifferential& d, double rho,
                     const PolarQuadrature& cfg) {
  if (!(rho > ann.inner() && rho < ann.outer())) throw DomainError("radius must lie inside the annulus");
  return circle_sum(d, rho, theta_count(d, cfg, 16));
}

double l1_norm(const RoundAnnulus& ann, const LaurentDifferential& d, const PolarQuadrature& cfg) {
  const Rule radial = radial_rule(ann, cfg);
  const std::size_t n = theta_count(d, cfg, 256);
  double sum = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.nodes[i];
    double ring = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      ring += std::abs(d(std::polar(rho, kTwoPi * static_cast<double>(j) / static_cast<double>(n))));
    }
    sum += radial.weights[i] * rho * ring * (kTwoPi / static_cast<double>(n));
  }
  return sum;
}

std::vector<DecayRow> decay_check(const RoundAnnulus& ann, const std::vector<LaurentDifferential>& sequence,
                                  const PolarQuadrature& cfg, unsigned jobs) {
  const double scale = 2.0 * kTwoPi * std::log(ann.r0());
  return parallel_map(sequence.size(), jobs, [&](std::size_t i) {
    DecayRow row;
    row.index = i;
    row.c_minus2 = sequence[i].coefficient(-2);
    row.pairing = pair_mu_phi(ann, sequence[i], cfg);
    row.expected = scale * row.c_minus2;
    row.l1 = l1_norm(ann, sequence[i], cfg);
    return row;
  });
}

}  // namespace lshape
