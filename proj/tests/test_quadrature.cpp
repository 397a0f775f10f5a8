#include "lshape/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lshape/errors.hpp"

namespace lshape {
namespace {

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (std::size_t n : {1u, 2u, 5u, 8u, 16u}) {
    const Rule rule = gauss_legendre(n);
    for (std::size_t degree = 0; degree < 2 * n; ++degree) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += rule.weights[k] * std::pow(rule.nodes[k], degree);
      const double exact = degree % 2 ? 0.0 : 2.0 / static_cast<double>(degree + 1);
      EXPECT_NEAR(sum, exact, 1e-14) << "n=" << n << " degree=" << degree;
    }
  }
}

TEST(CompositeGauss, CoversTheInterval) {
  const Rule rule = composite_gauss(0.5, 2.0, 7, 8);
  ASSERT_EQ(rule.size(), 56u);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.weights[k] * std::exp(rule.nodes[k]);
  EXPECT_NEAR(sum, std::exp(2.0) - std::exp(0.5), 1e-14);
}

TEST(AdaptiveIntegration, SmoothAndPeakedIntegrands) {
  QuadratureConfig cfg;
  EXPECT_NEAR(integral([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, cfg), 2.0, 1e-13);
  // Narrow Lorentzian forces deep bisection.
  const double eps = 1e-6;
  const double exact = 2.0 * std::atan(1.0 / eps) / eps;
  const double got = integral([&](double x) { return 1.0 / (x * x + eps * eps); }, -1.0, 1.0, cfg);
  EXPECT_NEAR(got / exact, 1.0, 1e-11);
  EXPECT_NEAR(integral([](double x) { return x; }, 1.0, 0.0, cfg), -0.5, 1e-15);
}

TEST(AdaptiveIntegration, ReportsNonConvergence) {
  QuadratureConfig cfg;
  cfg.max_depth = 2;
  EXPECT_THROW(integral([](double x) { return 1.0 / (x * x + 1e-12); }, -1.0, 1.0, cfg), QuadratureError);
  cfg.max_depth = 40;
  EXPECT_THROW(integral([](double x) { return 1.0 / x; }, -1.0, 1.0, cfg), QuadratureError);
}

TEST(QuadratureConfig, Validation) {
  QuadratureConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.rel_tol = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = QuadratureConfig{};
  cfg.max_depth = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = QuadratureConfig{};
  cfg.tail_cutoff = 1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

}  // namespace
}  // namespace lshape
