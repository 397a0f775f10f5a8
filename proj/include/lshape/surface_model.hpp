#pragma once

// The L-shaped polygon L(a,b,q), its double S(a,b,q) glued along every edge
// except the bottom one, the horizontal annulus decomposition of psi = dz^2,
// exact twist data, and the double-cover type calculator.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lshape/errors.hpp"
#include "lshape/quadrature.hpp"
#include "lshape/rational.hpp"

namespace lshape {

/// Shape triple (a, b, q) with a > 0, b >= 0, 0 < q < 1. Real is double or Rational.
template <class Real>
class BasicLShapeParams {
 public:
  BasicLShapeParams(Real a, Real b, Real q) : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)) {
    if (!(a_ > 0)) throw DomainError("L-shape requires a > 0");
    if (!(b_ >= 0)) throw DomainError("L-shape requires b >= 0");
    if (!(q_ > 0 && q_ < 1)) throw DomainError("L-shape requires 0 < q < 1");
  }

  const Real& a() const { return a_; }
  const Real& b() const { return b_; }
  const Real& q() const { return q_; }

  /// Flat area of the polygon.
  Real area() const { return a_ + b_ * q_; }

  bool operator==(const BasicLShapeParams&) const = default;

 private:
  Real a_;
  Real b_;
  Real q_;
};

using LShapeParams = BasicLShapeParams<double>;
using RationalLShapeParams = BasicLShapeParams<Rational>;

LShapeParams to_double(const RationalLShapeParams& params);

enum class Vertex { P5, P1, P2, Q, P3, P4 };

std::string to_string(Vertex v);

template <class Real>
struct Point {
  Real x;
  Real y;

  bool operator==(const Point&) const = default;
};

/// Boundary polygon in counterclockwise order P5, P1, P2, Q, P3, P4 with
/// P5 = (0,0) and the bottom edge P5P1 = [0,1] x {0}.
template <class Real>
struct BasicLPolygon {
  static constexpr std::array<Vertex, 6> labels{Vertex::P5, Vertex::P1, Vertex::P2,
                                                Vertex::Q,  Vertex::P3, Vertex::P4};
  std::array<Point<Real>, 6> vertices;
  /// Interior angle at each vertex in units of pi/2. When b = 0 the edge QP3
  /// has zero length and Q, P3 each carry a straight angle.
  std::array<int, 6> angle_quarters;
  /// Length of edge i -> i+1 (mod 6): P5P1, P1P2, P2Q, QP3, P3P4, P4P5.
  std::array<Real, 6> edge_lengths;

  /// Shoelace area.
  Real area() const {
    Real twice = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& p = vertices[i];
      const auto& n = vertices[(i + 1) % 6];
      twice += p.x * n.y - n.x * p.y;
    }
    return twice / 2;
  }
};

using LPolygon = BasicLPolygon<double>;

template <class Real>
BasicLPolygon<Real> build_polygon(const BasicLShapeParams<Real>& params) {
  const Real& a = params.a();
  const Real& b = params.b();
  const Real& q = params.q();
  BasicLPolygon<Real> poly;
  poly.vertices = {Point<Real>{Real(0), Real(0)}, Point<Real>{Real(1), Real(0)},
                   Point<Real>{Real(1), a},       Point<Real>{q, a},
                   Point<Real>{q, a + b},         Point<Real>{Real(0), a + b}};
  if (b == 0) {
    poly.angle_quarters = {1, 1, 1, 2, 2, 1};
  } else {
    poly.angle_quarters = {1, 1, 1, 3, 1, 1};
  }
  poly.edge_lengths = {Real(1), a, Real(1) - q, b, q, a + b};
  return poly;
}

/// One edge of the polygon, named by its endpoints in boundary order.
struct EdgeGluing {
  Vertex from;
  Vertex to;
  /// False only for the bottom edge, which becomes the boundary circle.
  bool glued;
};

struct ConePoint {
  Vertex vertex;
  /// Total cone angle on the doubled surface, in units of pi.
  int angle_over_pi;
  bool on_boundary;
};

/// Two copies of the polygon; every edge but P5P1 is glued to its twin on the
/// other sheet. Cone points are reported by angle: doubled right angles have
/// angle pi (simple poles of psi), the doubled reflex vertex has angle 3pi (a
/// simple zero). When b = 0, Q and P3 merge into a regular marked point.
template <class Real>
struct BasicDoubledSurface {
  BasicLPolygon<Real> sheet;
  std::array<EdgeGluing, 6> gluing;
  std::vector<ConePoint> cone_points;

  Real area() const { return 2 * sheet.area(); }
  Real boundary_length() const { return 2 * sheet.edge_lengths[0]; }
};

template <class Real>
BasicDoubledSurface<Real> build_doubled_surface(const BasicLShapeParams<Real>& params) {
  BasicDoubledSurface<Real> s;
  s.sheet = build_polygon(params);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto from = BasicLPolygon<Real>::labels[i];
    const auto to = BasicLPolygon<Real>::labels[(i + 1) % 6];
    s.gluing[i] = EdgeGluing{from, to, i != 0};
  }
  const bool degenerate = params.b() == 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto v = BasicLPolygon<Real>::labels[i];
    const bool boundary = v == Vertex::P5 || v == Vertex::P1;
    if (v == Vertex::Q) {
      s.cone_points.push_back({v, degenerate ? 2 : 3, false});
    } else if (v == Vertex::P3 && degenerate) {
      continue;  // coincides with Q
    } else {
      s.cone_points.push_back({v, 1, boundary});
    }
  }
  return s;
}

using DoubledSurface = BasicDoubledSurface<double>;

/// A cylinder of closed horizontal trajectories of psi.
template <class Real>
struct Annulus {
  Real circumference;
  Real height;
  /// height / circumference
  Real modulus;
  /// |psi|-area, i.e. twice the area of the block on one sheet.
  Real area;
  /// area / ||psi||_1
  Real weight;
};

/// Pi_1 is the doubled top block [0,q] x [a,a+b]; Pi_2 the doubled bottom
/// block [0,1] x [0,a].
template <class Real>
struct AnnulusDecomposition {
  std::array<Annulus<Real>, 2> annuli;

  const Annulus<Real>& upper() const { return annuli[0]; }
  const Annulus<Real>& lower() const { return annuli[1]; }
};

template <class Real>
AnnulusDecomposition<Real> decompose_annuli(const BasicLShapeParams<Real>& params) {
  const Real& a = params.a();
  const Real& b = params.b();
  const Real& q = params.q();
  if (b == 0) {
    throw DegenerateDecomposition("b = 0: psi has no zero and S is a single cylinder");
  }
  const Real total = 2 * (a + b * q);
  AnnulusDecomposition<Real> d;
  const Real c1 = 2 * q;
  const Real area1 = 2 * b * q;
  d.annuli[0] = Annulus<Real>{c1, b, b / c1, area1, area1 / total};
  const Real c2 = 2;
  const Real area2 = 2 * a;
  d.annuli[1] = Annulus<Real>{c2, a, a / c2, area2, area2 / total};
  return d;
}

/// Translation length t = lcm(1/m_1, 1/m_2) and the Dehn twist powers n_j = m_j t.
struct TwistData {
  std::array<Rational, 2> moduli;
  Rational t;
  std::array<BigInt, 2> exponents;
};

/// Exact in rational arithmetic. Throws DegenerateDecomposition when b = 0.
TwistData twist_data(const RationalLShapeParams& params);

/// Heights of Pi_1, Pi_2 on the polyplane point (lambda_1, lambda_2):
/// h_j(lambda) = Im(lambda_j) h_j. Throws DomainError unless Im lambda_j > 0.
std::pair<double, double> stretch_heights(const LShapeParams& params, std::complex<double> lambda1,
                                          std::complex<double> lambda2);

/// Tensor Gauss grid over one sheet of the polygon: the bottom rectangle
/// [0,1] x [0,a] and, when b > 0, the top block [0,q] x [a,a+b].
class PolygonGrid {
 public:
  struct Node {
    double x;
    double y;
    double weight;
  };

  /// `panels_x` x `panels_y` panels of `order` points per block.
  PolygonGrid(const LShapeParams& params, std::size_t panels_x, std::size_t panels_y,
              std::size_t order = 8);

  const LShapeParams& params() const { return params_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  LShapeParams params_;
  std::vector<Node> nodes_;
};

enum class Sheet { First = 1, Second = 2 };

/// Density samples on both sheets, one value per grid node, in the flat chart
/// where psi = dz^2.
struct SampledField {
  std::vector<std::complex<double>> first;
  std::vector<std::complex<double>> second;
};

using DensityFunction = std::function<std::complex<double>(Sheet, double, double)>;

SampledField sample_field(const PolygonGrid& grid, const DensityFunction& density);

/// Quadrature value of the pairing of nu with psi: the sum over both sheets of
/// the integral of nu dx dy. Throws GridMismatch if the samples do not belong
/// to `grid` or the grid was built for different parameters.
std::complex<double> pair_with_psi(const PolygonGrid& grid, const SampledField& field,
                                   const LShapeParams& params);

/// Data of a double cover of a surface Y of type (l, k, a), branched over a set
/// of `branch_points` points. Punctures in K_1 and holes in A_1 lift to a single
/// puncture/hole; those in K_2 and A_2 lift to two.
struct CoverSpec {
  int base_genus = 0;
  int punctures_single = 0;
  int punctures_double = 0;
  int holes_single = 0;
  int holes_double = 0;
  int branch_points = 0;
};

struct SurfaceType {
  int genus;
  int punctures;
  int holes;

  bool operator==(const SurfaceType&) const = default;
};

/// Type (g, n, b) of the fully ramified double cover via Riemann-Hurwitz:
/// g = 2l - 1 + (q + k_1 + a_1)/2, n = k_1 + 2k_2, b = a_1 + 2a_2.
/// Throws DomainError when q + k_1 + a_1 is odd, or zero on a sphere (no
/// connected double cover exists).
SurfaceType cover_type(const CoverSpec& spec);

struct CoverCase {
  std::string claim;
  CoverSpec spec;
  SurfaceType expected;
};

/// The five explicit covers used to reduce the low-complexity cases to the
/// three-punctured disc.
const std::vector<CoverCase>& published_cover_cases();

}  // namespace lshape
