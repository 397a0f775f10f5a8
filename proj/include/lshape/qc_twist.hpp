#pragma once

// The twist map on the collar [0,1] x [0,a] of either sheet,
//   f(x + iy) = (y/a) x + (1 - y/a) g(x) + iy,
// which restricts to g on the bottom edge and to the identity on y = a, and
// its Beltrami coefficient. Sheet 1 uses the chart z = x + iy, sheet 2 the
// mirrored chart w = x - iy, so mu_2 = conj(mu_1).

#include <complex>
#include <cstddef>
#include <vector>

#include "lshape/paths.hpp"
#include "lshape/sc_solver.hpp"
#include "lshape/surface_model.hpp"

namespace lshape {

struct CollarSpec {
  double height = 1.0;
  std::size_t nx = 256;
  std::size_t ny = 64;

  /// Throws DomainError unless height > 0 and nx, ny are multiples of 8 and >= 16.
  void validate() const;
};

/// Smallest |f_z| accepted before the map is declared degenerate.
inline constexpr double kDegeneracyThreshold = 1e-3;

/// f at (x, y) on `sheet`, written in that sheet's chart. Above the collar the
/// map is the identity. Throws DomainError for x outside [0, 1] or y < 0.
std::complex<double> twist_map(const BoundaryMap& g, double height, Sheet sheet, double x, double y);

struct WirtingerPair {
  std::complex<double> dz;
  std::complex<double> dzbar;
};

/// Closed-form f_z and f_zbar from g(x) and g'(x).
WirtingerPair twist_derivatives(double g, double g_prime, double height, Sheet sheet, double x,
                                double y);

/// mu = f_zbar / f_z. Throws DegenerateMap when |f_z| < kDegeneracyThreshold.
std::complex<double> beltrami(const BoundaryMap& g, double height, Sheet sheet, double x, double y);

/// Beltrami coefficient of one twist map sampled on the collar. g and g' are
/// evaluated once per x node of a composite Gauss grid.
class BeltramiField {
 public:
  BeltramiField(const BoundaryMap& g, const CollarSpec& spec);

  const CollarSpec& spec() const { return spec_; }

  /// Closed-form mu at an x node (index into x_nodes()) and arbitrary y.
  std::complex<double> at_node(Sheet sheet, std::size_t ix, double y) const;

  const std::vector<double>& x_nodes() const { return x_.nodes; }

  /// max |mu| over the grid, the lines x = 0, x = 1 and the bottom edge.
  double sup_norm() const { return sup_; }

  /// Sum over both sheets of the integral of mu dx dy on the collar.
  std::complex<double> pairing() const { return pairing_; }

  /// Integral of (1/2)(1 - y/a)(g' - 1) over the collar.
  double leading_term() const { return leading_; }

  /// max |Im(f_zbar on sheet 1 + f_zbar on sheet 2)| over the grid.
  double imaginary_cancellation() const { return imag_; }

  /// max |g(x) - x| and max |g'(x) - 1| over the x nodes and endpoints.
  double boundary_shift() const { return shift_; }
  double boundary_stretch() const { return stretch_; }

 private:
  CollarSpec spec_;
  Rule x_;
  Rule y_;
  std::vector<double> g_;
  std::vector<double> gp_;
  double sup_ = 0.0;
  std::complex<double> pairing_;
  double leading_ = 0.0;
  double imag_ = 0.0;
  double shift_ = 0.0;
  double stretch_ = 0.0;
};

struct PairingRow {
  double t = 0.0;
  double r = 0.0;
  double sup_norm = 0.0;
  double pairing_abs = 0.0;
  /// sup_norm^2 + pairing_abs.
  double proxy = 0.0;
  /// t^2 / log^2(1/t).
  double reference = 0.0;
  double leading_term = 0.0;
  double boundary_shift = 0.0;
  double boundary_stretch = 0.0;
};

struct PairingReport {
  double collar_height = 0.0;
  std::vector<PairingRow> rows;

  /// max / min of proxy / reference over the rows.
  double proxy_spread() const;
};

/// Twist data for already solved path points. The collar height is the
/// smallest a(t) among them; nx, ny come from `resolution`.
PairingReport pairing_report(const std::vector<PathPoint>& points, const CollarSpec& resolution,
                             const QuadratureConfig& quad = {});

/// Solves the path on `grid` and reports it.
PairingReport pairing_report(const BaseConfig& cfg, const std::vector<double>& grid,
                             const PathConfig& pcfg = {}, const CollarSpec& resolution = {});

/// One report row for a single solved point and collar.
PairingRow pairing_row(const PathPoint& point, const CollarSpec& collar, const QuadratureConfig& quad);

}  // namespace lshape
