#pragma once

// Schwarz-Christoffel maps from the upper half-plane onto L(a,b,q).
//
// The map is F(z) = J^{-1} \int_1^z sqrt(w - zeta + r) /
//   (sqrt(w + 1) sqrt(w - zeta) sqrt(w - lambda) sqrt(w - 1)) dw
// with prevertices -1 -> P2, zeta - r -> Q, zeta -> P3, lambda -> P4,
// 1 -> P5 and infinity -> P1. On every boundary interval the principal-branch
// integrand is a unit complex constant times its modulus, so each side length
// is a real integral of the modulus. Endpoint singularities are removed by
// x = e +- s^2 and the two infinite tails by x = +-1/s^2.

#include <functional>
#include <memory>
#include <optional>

#include "lshape/quadrature.hpp"
#include "lshape/surface_model.hpp"

namespace lshape {

/// Accessory parameters. Ordering: -1 < zeta - r <= zeta < lambda < 1.
struct Prevertices {
  double lambda = 0.0;
  double zeta = 0.0;
  double r = 0.0;

  double zeta_minus_r() const { return zeta - r; }

  /// Throws DomainError if the ordering fails or a gap is below machine resolution.
  void validate() const;
};

/// Real prevertices in increasing order (the merged zeta/zeta-r point is Q).
enum class Prevertex { P2, Q, P3, P4, P5 };

struct SideFunctionals {
  double A = 0.0;  ///< |P1P2|, integral over (-inf, -1)
  double B = 0.0;  ///< |QP3|, integral over (zeta - r, zeta)
  double J = 0.0;  ///< |P5P1|, integral over (1, inf)
  double Q = 0.0;  ///< |P3P4|, integral over (zeta, lambda)

  double a() const { return A / J; }
  double b() const { return B / J; }
  double q() const { return Q / J; }
};

SideFunctionals side_functionals(const Prevertices& p, const QuadratureConfig& cfg);

/// Integral of the integrand modulus from prevertex `from` over [from, from + length]
/// (direction +1) or [from - length, from] (direction -1). The interval must not
/// reach the next prevertex.
double arc_from_prevertex(const Prevertices& p, Prevertex from, int direction, double length,
                          const QuadratureConfig& cfg);

/// Integral of the integrand modulus over |x| >= x_abs on the side `side` (+1 or -1).
double tail_arc(const Prevertices& p, int side, double x_abs, const QuadratureConfig& cfg);

/// Integrand modulus at a real point that is not a prevertex.
double integrand_modulus(const Prevertices& p, double x);

struct SolverConfig {
  QuadratureConfig quad;
  /// Stop when every log-residual is below this.
  double tol = 1e-12;
  int max_iterations = 80;
  double fd_step = 1e-6;
};

/// Optional starting point for solve_parameters; equispaced prevertices otherwise.
using InitialGuess = std::optional<Prevertices>;

/// Solves (a, b, q) -> (lambda, zeta, r) by damped Newton in log-gap
/// coordinates, so every iterate respects the prevertex ordering. For b = 0
/// the unknowns reduce to (lambda, zeta) with r = 0. Throws SolverError when
/// the residual does not fall below cfg.tol within the iteration cap.
Prevertices solve_parameters(const LShapeParams& target, const SolverConfig& cfg,
                             const InitialGuess& guess = std::nullopt);

/// max(|A/J - a|, |B/J - b|, |Q/J - q|) relative to the target sides.
double relative_residual(const SideFunctionals& sides, const LShapeParams& target);

/// Restriction of F to [1, inf) composed with the identification of the bottom
/// edge P5P1 with [0, 1]. Caches J and the head/tail split.
class BoundaryChart {
 public:
  BoundaryChart(const Prevertices& p, const QuadratureConfig& cfg);

  const Prevertices& prevertices() const { return p_; }
  double J() const { return J_; }

  /// x in [1, inf] -> [0, 1]; strictly increasing.
  double forward(double x) const;
  /// Inverse of forward for s in [0, 1).
  double inverse(double s) const;
  /// dF/dx at x > 1.
  double density(double x) const;

 private:
  double head_integral(double v) const;  // x = 1 + v^2
  double tail_integral(double w) const;  // x = 1 / w^2

  Prevertices p_;
  QuadratureConfig cfg_;
  double J_;
  double head_;  // integral over [1, cutoff]
};

double forward_boundary(const Prevertices& p, double x, const QuadratureConfig& cfg);
double inverse_boundary(const Prevertices& p, double s, const QuadratureConfig& cfg);

/// A self-map of [0, 1] together with its derivative.
struct BoundaryMap {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// g = f_r o f_0^{-1} on [0, 1], where f_0 comes from the r = 0 prevertices
/// `base` and f_r from `moved` with the same (lambda, zeta). Throws DomainError
/// on mismatched prevertices.
BoundaryMap make_boundary_map(const Prevertices& base, const Prevertices& moved,
                              const QuadratureConfig& cfg);

double boundary_map_g(const Prevertices& base, const Prevertices& moved, double x,
                      const QuadratureConfig& cfg);

/// dg/dx = (J_0 / J_r) sqrt(y - zeta + r) / sqrt(y - zeta) at y = f_0^{-1}(x).
double boundary_derivative(const Prevertices& base, const Prevertices& moved, double x,
                           const QuadratureConfig& cfg);

}  // namespace lshape
