#include "lshape/sc_solver.hpp"

#include <cmath>
#include <complex>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "test_support.hpp"

namespace lshape {
namespace {

using cplx = std::complex<double>;

QuadratureConfig quad() { return QuadratureConfig{}; }

// Independent oracle: tanh-sinh on the raw modulus, which copes with the
// inverse-square-root endpoints without any change of variables. Distances
// to the endpoints come from the complement argument so nothing cancels.
double tanh_sinh_side(const Prevertices& p, double lo, double hi) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double zr = p.zeta - p.r;
  // Offset of each prevertex from lo, using r directly for the zeta pair.
  auto offset_from_lo = [&](double v, bool is_zr) {
    if (lo == p.zeta && is_zr) return -p.r;
    if (lo == zr && v == p.zeta && !is_zr) return hi - lo;
    return v - lo;
  };
  auto modulus = [&](double d_lo, double d_hi) {
    auto dist = [&](double v, bool is_zr) {
      const double off = offset_from_lo(v, is_zr);
      if (off == 0.0) return d_lo;
      if (off == hi - lo) return d_hi;
      return std::abs(d_lo - off);
    };
    const double num = std::sqrt(dist(zr, true));
    const double den = std::sqrt(dist(-1.0, false) * dist(p.zeta, false) * dist(p.lambda, false) *
                                 dist(1.0, false));
    return num / den;
  };
  const double tol = 1e-14;
  // Semi-infinite sides: x = end +- u / (1 - u), distance to the finite end from the complement.
  auto semi_infinite = [&](double end, double side) {
    return ts.integrate(
        [&](double u, double uc) {
          const double du = uc <= 0 ? -uc : u;
          const double one_minus = uc <= 0 ? 1.0 - u : uc;
          if (one_minus == 0.0) return 0.0;
          // Each |x - v| scaled by (1 - u) / u, so the large-x tail never overflows.
          auto scaled = [&](double v) {
            return v == end ? du : std::abs((end - v) * one_minus + side * du);
          };
          return std::sqrt(scaled(zr) / (scaled(-1.0) * scaled(p.zeta) * scaled(p.lambda) *
                                         scaled(1.0) * one_minus));
        },
        0.0, 1.0, tol);
  };
  if (std::isinf(hi)) return semi_infinite(lo, +1.0);
  if (std::isinf(lo)) return semi_infinite(hi, -1.0);
  const double width = hi - lo;
  return ts.integrate(
      [&](double x, double xc) {
        (void)x;
        if (xc <= 0) return modulus(-xc, width + xc);
        return modulus(width - xc, xc);
      },
      lo, hi, tol);
}

TEST(Prevertices, Validation) {
  EXPECT_NO_THROW((Prevertices{0.5, 0.0, 0.2}.validate()));
  EXPECT_NO_THROW((Prevertices{0.5, 0.0, 0.0}.validate()));
  EXPECT_THROW((Prevertices{0.0, 0.5, 0.1}.validate()), DomainError);
  EXPECT_THROW((Prevertices{0.5, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((Prevertices{1.0, 0.0, 0.1}.validate()), DomainError);
  EXPECT_THROW((Prevertices{0.5, 0.0, -0.1}.validate()), DomainError);
  EXPECT_THROW((Prevertices{0.5, 0.0, 1e-18}.validate()), DomainError);
}

TEST(SideFunctionals, RectangleMatchesEllipticIntegrals) {
  for (double lambda : {-0.6, -0.1, 0.0, 0.3, 0.85}) {
    const double zeta = lambda - 0.4 * (lambda + 1.0);
    const Prevertices p{lambda, zeta, 0.0};
    const auto s = side_functionals(p, quad());
    const double k = std::sqrt((1.0 + lambda) / 2.0);
    const double kp = std::sqrt((1.0 - lambda) / 2.0);
    EXPECT_NEAR(s.J / (std::sqrt(2.0) * boost::math::ellint_1(k)), 1.0, 1e-12);
    EXPECT_NEAR(s.A / (std::sqrt(2.0) * boost::math::ellint_1(kp)), 1.0, 1e-12);
    EXPECT_EQ(s.B, 0.0);
    EXPECT_NEAR(s.q(), rectangle_marked_q(lambda, zeta), 1e-12);
    EXPECT_NEAR(rectangle_lambda(s.a()), lambda, 1e-10);
  }
}

TEST(SideFunctionals, MatchIndependentTanhSinh) {
  for (const Prevertices p : {Prevertices{0.4, -0.2, 0.3}, Prevertices{0.1, -0.05, 1e-4},
                              Prevertices{0.7, 0.6, 0.5}, Prevertices{-0.3, -0.5, 0.2}}) {
    const auto s = side_functionals(p, quad());
    EXPECT_NEAR(s.J / tanh_sinh_side(p, 1.0, INFINITY), 1.0, 1e-10);
    EXPECT_NEAR(s.A / tanh_sinh_side(p, -INFINITY, -1.0), 1.0, 1e-10);
    EXPECT_NEAR(s.B / tanh_sinh_side(p, p.zeta - p.r, p.zeta), 1.0, 1e-10);
    EXPECT_NEAR(s.Q / tanh_sinh_side(p, p.zeta, p.lambda), 1.0, 1e-10);
  }
}

TEST(SideFunctionals, PositivityAndPolygonClosure) {
  std::mt19937_64 rng(test_seed());
  std::uniform_real_distribution<double> u(0.02, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    double g[4] = {u(rng), u(rng) * u(rng) * u(rng), u(rng), u(rng)};
    const double sum = g[0] + g[1] + g[2] + g[3];
    for (double& x : g) x *= 2.0 / sum;
    const Prevertices p{1.0 - g[3], -1.0 + g[0] + g[1], g[1]};
    const auto s = side_functionals(p, quad());
    EXPECT_GT(s.A, 0.0);
    EXPECT_GT(s.B, 0.0);
    EXPECT_GT(s.J, 0.0);
    EXPECT_GT(s.Q, 0.0);
    // Right edge P4P5 has height a + b; edge P2Q has width 1 - q.
    const double right = arc_from_prevertex(p, Prevertex::P4, +1, 0.5 * (1 - p.lambda), quad()) +
                         arc_from_prevertex(p, Prevertex::P5, -1, 0.5 * (1 - p.lambda), quad());
    const double h = 0.5 * (p.zeta - p.r + 1.0);
    const double middle = arc_from_prevertex(p, Prevertex::P2, +1, h, quad()) +
                          arc_from_prevertex(p, Prevertex::Q, -1, h, quad());
    EXPECT_NEAR(right / (s.A + s.B), 1.0, 1e-11);
    EXPECT_NEAR(middle / (s.J - s.Q), 1.0, 1e-11);
  }
}

// Principal-branch integrand; for w in the upper half-plane every sqrt(w - e)
// is the boundary value used by the map.
cplx sc_integrand(const Prevertices& p, cplx w) {
  return std::sqrt(w - p.zeta + p.r) /
         (std::sqrt(w + 1.0) * std::sqrt(w - p.zeta) * std::sqrt(w - p.lambda) * std::sqrt(w - 1.0));
}

TEST(SideFunctionals, BranchBookkeepingMatchesComplexContour) {
  for (const Prevertices p : {Prevertices{0.4, -0.2, 0.3}, Prevertices{0.2, 0.0, 0.05}}) {
    const auto s = side_functionals(p, quad());
    const double xa = 0.5 * (p.lambda + 1.0);         // on P4P5
    const double xb = 0.5 * (-1.0 + p.zeta - p.r);    // on P2Q
    // Magnitude bookkeeping: F(xb) - F(xa) with F(1) = 0 (unnormalized).
    const double up = arc_from_prevertex(p, Prevertex::P5, -1, 1.0 - xa, quad());
    const double left = arc_from_prevertex(p, Prevertex::P2, +1, xb + 1.0, quad());
    const cplx expected = cplx(s.J - left, s.A) - cplx(0.0, up);
    // Complex contour: upper semicircle from xa to xb.
    const double c = 0.5 * (xa + xb);
    const double rad = 0.5 * (xa - xb);
    auto along = [&](double theta) {
      const cplx w = c + rad * std::exp(cplx(0.0, theta));
      const cplx dw = cplx(0.0, 1.0) * rad * std::exp(cplx(0.0, theta));
      return sc_integrand(p, w) * dw;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double re = GK::integrate([&](double t) { return along(t).real(); }, 0.0, M_PI, 20, 1e-14);
    const double im = GK::integrate([&](double t) { return along(t).imag(); }, 0.0, M_PI, 20, 1e-14);
    EXPECT_NEAR(re, expected.real(), 1e-10);
    EXPECT_NEAR(im, expected.imag(), 1e-10);
  }
}

TEST(SideFunctionals, BVanishesAndIncreasesWithR) {
  const double lambda = 0.3;
  const double zeta = -0.1;
  EXPECT_EQ(side_functionals({lambda, zeta, 0.0}, quad()).B, 0.0);
  double prev_b = 0.0;
  double prev_q = side_functionals({lambda, zeta, 0.0}, quad()).q();
  for (double r : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5}) {
    const auto s = side_functionals({lambda, zeta, r}, quad());
    EXPECT_GT(s.B, prev_b);
    EXPECT_GT(s.q(), prev_q);
    EXPECT_NEAR(s.B / tanh_sinh_side({lambda, zeta, r}, zeta - r, zeta), 1.0, 1e-9);
    prev_b = s.B;
    prev_q = s.q();
  }
  // B(r) ~ r: B / r stays bounded as r -> 0.
  const double small = side_functionals({lambda, zeta, 1e-9}, quad()).B / 1e-9;
  const double tiny = side_functionals({lambda, zeta, 1e-11}, quad()).B / 1e-11;
  EXPECT_NEAR(small / tiny, 1.0, 1e-3);
}

TEST(SideFunctionals, HalvingToleranceIsStable) {
  const Prevertices p{0.35, -0.15, 0.02};
  QuadratureConfig loose;
  loose.rel_tol = 1e-10;
  QuadratureConfig tight = loose;
  tight.rel_tol = 0.5e-10;
  const auto a = side_functionals(p, loose);
  const auto b = side_functionals(p, tight);
  EXPECT_LT(std::abs(a.A - b.A), 1e-10 * a.A);
  EXPECT_LT(std::abs(a.B - b.B), 1e-10 * a.B);
  EXPECT_LT(std::abs(a.J - b.J), 1e-10 * a.J);
  EXPECT_LT(std::abs(a.Q - b.Q), 1e-10 * a.Q);
}

TEST(SolveParameters, RoundTripFullTarget) {
  const LShapeParams target(1.0, 1.0, 0.5);
  const auto p = solve_parameters(target, SolverConfig{});
  EXPECT_NO_THROW(p.validate());
  EXPECT_LT(relative_residual(side_functionals(p, quad()), target), 1e-8);
}

TEST(SolveParameters, RectangleTargetMatchesEllipticOracle) {
  for (double a0 : {0.5, 1.0, 2.0}) {
    const LShapeParams target(a0, 0.0, 0.3);
    const auto p = solve_parameters(target, SolverConfig{});
    EXPECT_EQ(p.r, 0.0);
    EXPECT_NEAR(p.lambda, rectangle_lambda(a0), 1e-8);
    EXPECT_NEAR(rectangle_marked_q(p.lambda, p.zeta), 0.3, 1e-10);
  }
}

TEST(SolveParameters, HonoursGuessAndRejectsInfeasible) {
  const LShapeParams target(1.2, 0.4, 0.6);
  const auto p = solve_parameters(target, SolverConfig{});
  const auto again = solve_parameters(target, SolverConfig{}, p);
  EXPECT_NEAR(again.lambda, p.lambda, 1e-10);
  EXPECT_THROW(solve_parameters(target, SolverConfig{}, Prevertices{0.0, 0.5, 0.1}), SolverError);
}

TEST(SolveParameters, IterationCapReported) {
  SolverConfig cfg;
  cfg.max_iterations = 1;
  EXPECT_THROW(solve_parameters(LShapeParams(2.0, 0.8, 0.7), cfg), SolverError);
}

TEST(BoundaryChart, EndpointsAndRoundTrip) {
  const Prevertices p{0.3, -0.1, 0.01};
  const BoundaryChart f(p, quad());
  EXPECT_EQ(f.forward(1.0), 0.0);
  EXPECT_EQ(f.forward(INFINITY), 1.0);
  EXPECT_NEAR(f.forward(1e12), 1.0, 1e-5);
  EXPECT_EQ(f.inverse(0.0), 1.0);
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double s = 0.99 * i / 100.0;
    const double x = f.inverse(s);
    EXPECT_GT(x, prev);
    EXPECT_NEAR(f.forward(x), s, 1e-10);
    prev = x;
  }
  EXPECT_GT(f.inverse(1.0 - 1e-9), 1e15);
  EXPECT_NEAR(f.forward(f.inverse(1.0 - 1e-9)), 1.0 - 1e-9, 1e-14);
  EXPECT_THROW(f.inverse(1.0), DomainError);
  EXPECT_THROW(f.forward(0.5), DomainError);
}

TEST(BoundaryChart, DensityIsTheDerivative) {
  const BoundaryChart f(Prevertices{0.3, -0.1, 0.01}, quad());
  for (double x : {1.01, 1.5, 2.5, 10.0}) {
    const double h = 1e-3 * std::min(x - 1.0, 1.0);
    const double fd = (f.forward(x - 2 * h) - 8 * f.forward(x - h) + 8 * f.forward(x + h) -
                       f.forward(x + 2 * h)) / (12 * h);
    EXPECT_NEAR(fd / f.density(x), 1.0, 1e-8);
  }
}

TEST(FreeFunctions, ForwardInverse) {
  const Prevertices p{0.1, -0.3, 0.0};
  EXPECT_EQ(forward_boundary(p, 1.0, quad()), 0.0);
  EXPECT_NEAR(forward_boundary(p, inverse_boundary(p, 0.5, quad()), quad()), 0.5, 1e-12);
}

TEST(BoundaryMap, IdentityAndEndpoints) {
  const Prevertices base{0.3, -0.1, 0.0};
  const auto id = make_boundary_map(base, base, quad());
  for (double x : {0.0, 0.1, 0.5, 0.93, 1.0}) {
    EXPECT_NEAR(id.value(x), x, 1e-13);
    EXPECT_NEAR(id.derivative(x), 1.0, 1e-13);
  }
  const Prevertices moved{0.3, -0.1, 1e-3};
  EXPECT_EQ(boundary_map_g(base, moved, 0.0, quad()), 0.0);
  EXPECT_EQ(boundary_map_g(base, moved, 1.0, quad()), 1.0);
  EXPECT_THROW(make_boundary_map(moved, base, quad()), DomainError);
  EXPECT_THROW(make_boundary_map(base, Prevertices{0.31, -0.1, 1e-3}, quad()), DomainError);
}

TEST(BoundaryMap, DerivativeMatchesCentralDifferences) {
  const Prevertices base{0.3, -0.1, 0.0};
  const Prevertices moved{0.3, -0.1, 2e-3};
  const auto g = make_boundary_map(base, moved, quad());
  double prev = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double x = i / 50.0;
    const double h = 1e-5;
    const double fd = (g.value(x + h) - g.value(x - h)) / (2 * h);
    EXPECT_NEAR(g.derivative(x), fd, 1e-6) << "x=" << x;
    EXPECT_GT(g.value(x), prev);
    EXPECT_GT(g.derivative(x), 0.0);
    prev = g.value(x);
  }
}

TEST(BoundaryMap, DeviationScalesLinearlyInR) {
  const Prevertices base{0.3, -0.1, 0.0};
  std::vector<double> ratio_g;
  std::vector<double> ratio_dg;
  for (double r : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const auto g = make_boundary_map(base, Prevertices{0.3, -0.1, r}, quad());
    double sup_g = 0.0;
    double sup_dg = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double x = i / 40.0;
      sup_g = std::max(sup_g, std::abs(g.value(x) - x));
      sup_dg = std::max(sup_dg, std::abs(g.derivative(x) - 1.0));
    }
    ratio_g.push_back(sup_g / r);
    ratio_dg.push_back(sup_dg / r);
  }
  for (std::size_t k = 1; k < ratio_g.size(); ++k) {
    EXPECT_NEAR(ratio_g[k] / ratio_g[0], 1.0, 0.05);
    EXPECT_NEAR(ratio_dg[k] / ratio_dg[0], 1.0, 0.05);
  }
}

}  // namespace
}  // namespace lshape
