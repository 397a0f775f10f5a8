#pragma once

// The two paths through the base surface S(a0, b0, q0):
//   sigma1(t) = S(a0, 0, q0 - t)
//   sigma2(t) = S(a(t), b(t), q0)
// sigma2 reuses the (lambda, zeta) of sigma1(t) and opens the reflex vertex
// by r(t) until the marked width returns to q0.

#include <string>
#include <vector>

#include "lshape/rational.hpp"
#include "lshape/sc_solver.hpp"
#include "lshape/surface_model.hpp"

namespace lshape {

struct BaseConfig {
  Rational a0;
  Rational b0;
  Rational q0;

  BaseConfig(Rational a, Rational b, Rational q);

  double a() const { return to_double(a0); }
  double b() const { return to_double(b0); }
  double q() const { return to_double(q0); }
};

struct PathPoint {
  double t = 0.0;
  double lambda = 0.0;
  double zeta = 0.0;
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  double fol_proxy = 0.0;
  /// |Q/J - q0| at the solved r.
  double residual = 0.0;

  /// Prevertices of sigma1(t).
  Prevertices base() const { return {lambda, zeta, 0.0}; }
  /// Prevertices of sigma2(t).
  Prevertices moved() const { return {lambda, zeta, r}; }
};

/// (a0, 0, q0 - t). Throws DomainError unless 0 <= t < q0.
LShapeParams sigma1_params(const BaseConfig& cfg, double t);

struct PathConfig {
  SolverConfig solver;
  /// Required |Q/J - q0| at the solved r.
  double identity_tol = 1e-9;
  int max_bracket_steps = 80;
};

/// Two-stage solve at time t. t = 0 returns the base surface with r = 0.
/// Throws SolverError when either stage fails or r cannot be bracketed.
PathPoint solve_path_point(const BaseConfig& cfg, double t, const PathConfig& pcfg = {});

/// a(t) + q0 b(t).
double fol_proxy(const PathPoint& point, const BaseConfig& cfg);

/// `count` samples between t_min and t_max, strictly decreasing.
std::vector<double> t_grid(double t_min, double t_max, int count, bool log_spaced = true);

/// 24 log-spaced samples in [1e-4, 1e-1].
std::vector<double> default_t_grid();

/// Per-decade summary of a positive ratio sampled along the grid.
struct DecadeStats {
  double t_hi = 0.0;
  double t_lo = 0.0;
  int samples = 0;
  /// Geometric mean of the ratio over the decade.
  double mean = 0.0;
  /// max / min - 1 over the decade.
  double variation = 0.0;
};

struct AsymptoticFit {
  std::vector<double> t;
  /// rho(t) = r(t) log(1/t) / t.
  std::vector<double> rho;
  /// (folProxy(t) - a0) log(1/t) / t.
  std::vector<double> beta;
  /// (folProxy(t) - a0) log(1/t) / t^2, the next-order diagnostic.
  std::vector<double> beta_second;
  double C1 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  /// Decades ordered from the finest (smallest t) outward.
  std::vector<DecadeStats> rho_decades;
  std::vector<DecadeStats> beta_decades;
  std::vector<DecadeStats> beta_second_decades;
  /// |rho(t_{i+1}) / rho(t_i) - 1| along the grid.
  std::vector<double> rho_steps;

  /// Relative change of the beta decade means between the two finest decades.
  double beta1_stability() const;
};

/// Fits r(t) ~ t / (C1 log(1/t)) and folProxy(t) - a0 ~ beta1 t / log(1/t).
/// Both coefficients are log-space least-squares fits over the finest decade.
/// Throws DomainError for fewer than 6 points, less than two decades, or a
/// non-positive ratio.
AsymptoticFit fit_asymptotics(const std::vector<PathPoint>& points, const BaseConfig& cfg);

}  // namespace lshape
