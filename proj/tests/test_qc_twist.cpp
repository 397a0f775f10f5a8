#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "lshape/errors.hpp"
#include "lshape/qc_twist.hpp"

namespace lshape {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

BoundaryMap identity_map() { return {[](double x) { return x; }, [](double) { return 1.0; }}; }

// g(x) = x + eps sin(2 pi x) x (1 - x): fixes 0 and 1, smooth, |g - x| = O(eps).
BoundaryMap synthetic_map(double eps) {
  return {[eps](double x) { return x + eps * std::sin(2 * kPi * x) * x * (1 - x); },
          [eps](double x) {
            return 1.0 + eps * (2 * kPi * std::cos(2 * kPi * x) * x * (1 - x) +
                                std::sin(2 * kPi * x) * (1 - 2 * x));
          }};
}

PathPoint unit_point(double t) { return solve_path_point(BaseConfig(1, 1, Rational(1, 2)), t); }

BoundaryMap path_map(const PathPoint& p) { return make_boundary_map(p.base(), p.moved(), QuadratureConfig{}); }

// Dilatation from a 5-point stencil of twist_map in the sheet's own chart.
cplx stencil_mu(const BoundaryMap& g, double a, Sheet sheet, double x, double y, double h) {
  auto f = [&](double u, double v) { return twist_map(g, a, sheet, u, v); };
  auto d = [&](auto shift) {
    return (-shift(2 * h) + 8.0 * shift(h) - 8.0 * shift(-h) + shift(-2 * h)) / (12.0 * h);
  };
  const cplx fx = d([&](double s) { return f(x + s, y); });
  const cplx fy = d([&](double s) { return f(x, y + s); });
  // Sheet 2 chart is w = x - iy, so d/dIm(w) = -d/dy.
  const cplx fv = sheet == Sheet::First ? fy : -fy;
  const cplx fz = 0.5 * (fx - cplx(0, 1) * fv);
  const cplx fzbar = 0.5 * (fx + cplx(0, 1) * fv);
  return fzbar / fz;
}

TEST(CollarSpec, Validation) {
  EXPECT_NO_THROW((CollarSpec{1.0, 16, 16}.validate()));
  EXPECT_THROW((CollarSpec{0.0, 16, 16}.validate()), DomainError);
  EXPECT_THROW((CollarSpec{1.0, 8, 16}.validate()), DomainError);
  EXPECT_THROW((CollarSpec{1.0, 20, 16}.validate()), DomainError);
}

TEST(TwistMap, IdentityBoundaryGivesIdentity) {
  const auto g = identity_map();
  for (double x : {0.0, 0.3, 1.0}) {
    for (double y : {0.0, 0.2, 0.7}) {
      EXPECT_EQ(twist_map(g, 0.7, Sheet::First, x, y), cplx(x, y));
      EXPECT_EQ(twist_map(g, 0.7, Sheet::Second, x, y), cplx(x, -y));
      EXPECT_EQ(beltrami(g, 0.7, Sheet::First, x, y), 0.0);
    }
  }
  const BeltramiField field(g, {0.7, 16, 16});
  EXPECT_EQ(field.sup_norm(), 0.0);
  EXPECT_EQ(field.pairing(), 0.0);
}

TEST(TwistMap, BoundaryCompatibility) {
  const PathPoint p = unit_point(1e-2);
  const auto g = path_map(p);
  const double a = 0.9;
  for (double x : {0.0, 0.1, 0.45, 0.8, 1.0}) {
    for (Sheet s : {Sheet::First, Sheet::Second}) {
      EXPECT_NEAR(std::abs(twist_map(g, a, s, x, 0.0) - g.value(x)), 0.0, 1e-12);
      const cplx top = twist_map(g, a, s, x, a);
      EXPECT_NEAR(top.real(), x, 1e-12);
      EXPECT_NEAR(std::abs(top.imag()), a, 1e-12);
      // Identity above the collar.
      EXPECT_EQ(twist_map(g, a, s, x, 1.2).real(), x);
    }
  }
  EXPECT_EQ(twist_map(g, a, Sheet::First, 0.0, 0.0), cplx(0.0, 0.0));
  EXPECT_EQ(twist_map(g, a, Sheet::First, 1.0, 0.0), cplx(1.0, 0.0));
  EXPECT_THROW(twist_map(g, a, Sheet::First, 1.1, 0.2), DomainError);
  EXPECT_THROW(twist_map(g, a, Sheet::First, 0.5, -0.1), DomainError);
}

TEST(Beltrami, MatchesFiniteDifferencesOnBothSheets) {
  const PathPoint p = unit_point(5e-2);
  const double a = p.a;
  for (const auto& g : {path_map(p), synthetic_map(0.05)}) {
    for (Sheet s : {Sheet::First, Sheet::Second}) {
      for (double x : {0.05, 0.3, 0.61, 0.9}) {
        for (double y : {0.05, 0.4, 0.8}) {
          const cplx mu = beltrami(g, a, s, x, y);
          const cplx fd = stencil_mu(g, a, s, x, y, 1e-3);
          EXPECT_LT(std::abs(mu - fd), 1e-6) << "sheet " << static_cast<int>(s) << " at " << x << "," << y;
        }
      }
    }
  }
}

TEST(Beltrami, SheetsAreConjugate) {
  const auto g = synthetic_map(0.1);
  for (double x : {0.2, 0.7}) {
    for (double y : {0.0, 0.3}) {
      EXPECT_EQ(beltrami(g, 0.5, Sheet::Second, x, y), std::conj(beltrami(g, 0.5, Sheet::First, x, y)));
      const auto d1 = twist_derivatives(g.value(x), g.derivative(x), 0.5, Sheet::First, x, y);
      const auto d2 = twist_derivatives(g.value(x), g.derivative(x), 0.5, Sheet::Second, x, y);
      EXPECT_LE(std::abs((d1.dzbar + d2.dzbar).imag()), 1e-12);
      EXPECT_NEAR((d1.dzbar + d2.dzbar).real(), (1 - y / 0.5) * (g.derivative(x) - 1), 1e-15);
    }
  }
}

TEST(Beltrami, DegenerateInputThrows) {
  const BoundaryMap folded{[](double x) { return x; }, [](double) { return -1.0; }};
  EXPECT_THROW(beltrami(folded, 1.0, Sheet::First, 0.5, 0.0), DegenerateMap);
  EXPECT_NO_THROW(beltrami(folded, 1.0, Sheet::First, 0.5, 0.5));
}

TEST(BeltramiField, SupNormScalesLinearlyInPerturbation) {
  double prev_sup = 0.0;
  double prev_pair = 0.0;
  for (double eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const BeltramiField field(synthetic_map(eps), {0.8, 64, 32});
    if (prev_sup > 0.0) {
      EXPECT_NEAR(prev_sup / field.sup_norm(), 2.0, 2e-2);
      EXPECT_NEAR(prev_pair / std::abs(field.pairing()), 4.0, 4e-2);
    }
    EXPECT_LT(std::abs(field.leading_term()), 1e-12);
    prev_sup = field.sup_norm();
    prev_pair = std::abs(field.pairing());
  }
}

TEST(BeltramiField, GridDoublingIsConverged) {
  for (double t : {1e-3, 1e-1}) {
    const PathPoint p = unit_point(t);
    const auto g = path_map(p);
    const BeltramiField coarse(g, {p.a, 256, 64});
    const BeltramiField fine(g, {p.a, 512, 128});
    EXPECT_LE(std::abs(coarse.pairing() - fine.pairing()), 1e-9);
    EXPECT_NEAR(coarse.sup_norm(), fine.sup_norm(), 1e-3 * fine.sup_norm());
    EXPECT_LT(std::abs(coarse.leading_term()), 1e-10);
    EXPECT_LE(coarse.imaginary_cancellation(), 1e-12);
    EXPECT_LT(coarse.sup_norm(), 1.0);
  }
}

TEST(BeltramiField, PairingIsSecondOrder) {
  // pairing = 2 int P - 2 int (P^2 + R^2)(1 + P) / |f_z|^2 and int P = 0,
  // so a first-order quadrature of the same integrand gives the oracle.
  const PathPoint p = unit_point(2e-2);
  const auto g = path_map(p);
  const double a = p.a;
  const BeltramiField field(g, {a, 256, 64});
  const Rule xs = composite_gauss(0, 1, 32, 8);
  const Rule ys = composite_gauss(0, a, 8, 8);
  double oracle = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs.nodes[i];
    const double gx = g.value(x);
    const double gp = g.derivative(x);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double P = 0.5 * (1 - ys.nodes[j] / a) * (gp - 1);
      const double R = (gx - x) / (2 * a);
      const double D = (1 + P) * (1 + P) + R * R;
      oracle += xs.weights[i] * ys.weights[j] * (-2.0 * (P * P + R * R) * (1 + P) / D);
    }
  }
  EXPECT_NEAR(field.pairing().real(), oracle, 1e-12);
  EXPECT_EQ(field.pairing().imag(), 0.0);
  EXPECT_LT(field.pairing().real(), 0.0);
}

TEST(PairingReport, ReportOnShortGrid) {
  const BaseConfig cfg(1, 1, Rational(1, 2));
  const auto report = pairing_report(cfg, t_grid(1e-3, 1e-1, 7));
  ASSERT_EQ(report.rows.size(), 7u);
  double min_a = INFINITY;
  for (double t : t_grid(1e-3, 1e-1, 7)) min_a = std::min(min_a, solve_path_point(cfg, t).a);
  EXPECT_EQ(report.collar_height, min_a);
  for (const auto& row : report.rows) {
    EXPECT_LT(row.sup_norm, 0.5);
    EXPECT_NEAR(row.proxy, row.sup_norm * row.sup_norm + row.pairing_abs, 1e-18);
    const double L = std::log(1 / row.t);
    EXPECT_EQ(row.reference, row.t * row.t / (L * L));
  }
  EXPECT_LT(report.proxy_spread(), 3.0);
  EXPECT_THROW(pairing_report(cfg, {0.6}), DomainError);
}

}  // namespace
}  // namespace lshape
