#include "lshape/qc_twist.hpp"

#include <algorithm>
#include <cmath>

#include "lshape/errors.hpp"

namespace lshape {

using cplx = std::complex<double>;

void CollarSpec::validate() const {
  if (!(height > 0.0) || !std::isfinite(height)) throw DomainError("collar height must be positive");
  if (nx < 16 || ny < 16 || nx % 8 != 0 || ny % 8 != 0) {
    throw DomainError("collar grid needs nx, ny >= 16 and divisible by 8");
  }
}

namespace {

void check_point(double height, double x, double y) {
  if (!(height > 0.0)) throw DomainError("collar height must be positive");
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0)) throw DomainError("twist map point outside the surface");
}

}  // namespace

cplx twist_map(const BoundaryMap& g, double height, Sheet sheet, double x, double y) {
  check_point(height, x, y);
  const double im = sheet == Sheet::First ? y : -y;
  if (y >= height) return {x, im};
  const double s = y / height;
  return {s * x + (1.0 - s) * g.value(x), im};
}

WirtingerPair twist_derivatives(double g, double g_prime, double height, Sheet sheet, double x,
                                double y) {
  check_point(height, x, y);
  if (y >= height) return {1.0, 0.0};
  const double p = 0.5 * (1.0 - y / height) * (g_prime - 1.0);
  const double r = (g - x) / (2.0 * height);
  const double sign = sheet == Sheet::First ? 1.0 : -1.0;
  return {cplx(1.0 + p, sign * r), cplx(p, -sign * r)};
}

namespace {

cplx dilatation(const WirtingerPair& d) {
  if (std::abs(d.dz) < kDegeneracyThreshold) throw DegenerateMap("twist map has |f_z| below threshold");
  return d.dzbar / d.dz;
}

}  // namespace

cplx beltrami(const BoundaryMap& g, double height, Sheet sheet, double x, double y) {
  check_point(height, x, y);
  if (y >= height) return 0.0;
  return dilatation(twist_derivatives(g.value(x), g.derivative(x), height, sheet, x, y));
}

BeltramiField::BeltramiField(const BoundaryMap& g, const CollarSpec& spec)
    : spec_(spec),
      x_(composite_gauss(0.0, 1.0, spec.nx / 8, 8)),
      y_(composite_gauss(0.0, spec.height, spec.ny / 8, 8)) {
  spec_.validate();
  g_.resize(x_.size());
  gp_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    g_[i] = g.value(x_.nodes[i]);
    gp_[i] = g.derivative(x_.nodes[i]);
    shift_ = std::max(shift_, std::abs(g_[i] - x_.nodes[i]));
    stretch_ = std::max(stretch_, std::abs(gp_[i] - 1.0));
  }
  const double a = spec_.height;

  // Vertical edges: g fixes 0 and 1, only g' enters.
  for (double x : {0.0, 1.0}) {
    const double gp = g.derivative(x);
    stretch_ = std::max(stretch_, std::abs(gp - 1.0));
    for (double y : y_.nodes) {
      sup_ = std::max(sup_, std::abs(dilatation(twist_derivatives(x, gp, a, Sheet::First, x, y))));
    }
    sup_ = std::max(sup_, std::abs(dilatation(twist_derivatives(x, gp, a, Sheet::First, x, 0.0))));
  }

  cplx pairing = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double x = x_.nodes[i];
    sup_ = std::max(sup_, std::abs(at_node(Sheet::First, i, 0.0)));
    cplx column = 0.0;
    double lead = 0.0;
    for (std::size_t j = 0; j < y_.size(); ++j) {
      const double y = y_.nodes[j];
      const auto d1 = twist_derivatives(g_[i], gp_[i], a, Sheet::First, x, y);
      const auto d2 = twist_derivatives(g_[i], gp_[i], a, Sheet::Second, x, y);
      const cplx mu1 = dilatation(d1);
      const cplx mu2 = dilatation(d2);
      sup_ = std::max({sup_, std::abs(mu1), std::abs(mu2)});
      imag_ = std::max(imag_, std::abs((d1.dzbar + d2.dzbar).imag()));
      column += y_.weights[j] * (mu1 + mu2);
      lead += y_.weights[j] * 0.5 * (1.0 - y / a) * (gp_[i] - 1.0);
    }
    pairing += x_.weights[i] * column;
    leading_ += x_.weights[i] * lead;
  }
  pairing_ = pairing;
}

cplx BeltramiField::at_node(Sheet sheet, std::size_t ix, double y) const {
  if (ix >= x_.size()) throw DomainError("x node index out of range");
  return dilatation(twist_derivatives(g_[ix], gp_[ix], spec_.height, sheet, x_.nodes[ix], y));
}

double PairingReport::proxy_spread() const {
  if (rows.empty()) return 1.0;
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& row : rows) {
    const double ratio = row.proxy / row.reference;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return hi / lo;
}

PairingRow pairing_row(const PathPoint& point, const CollarSpec& collar, const QuadratureConfig& quad) {
  const BoundaryMap g = make_boundary_map(point.base(), point.moved(), quad);
  const BeltramiField field(g, collar);
  PairingRow row;
  row.t = point.t;
  row.r = point.r;
  row.sup_norm = field.sup_norm();
  row.pairing_abs = std::abs(field.pairing());
  row.proxy = row.sup_norm * row.sup_norm + row.pairing_abs;
  const double L = std::log(1.0 / point.t);
  row.reference = point.t * point.t / (L * L);
  row.leading_term = field.leading_term();
  row.boundary_shift = field.boundary_shift();
  row.boundary_stretch = field.boundary_stretch();
  return row;
}

namespace {

double collar_height(const std::vector<PathPoint>& points) {
  if (points.empty()) throw DomainError("pairing report needs at least one path point");
  double h = INFINITY;
  for (const auto& p : points) h = std::min(h, p.a);
  return h;
}

}  // namespace

PairingReport pairing_report(const std::vector<PathPoint>& points, const CollarSpec& resolution,
                             const QuadratureConfig& quad) {
  PairingReport report;
  report.collar_height = collar_height(points);
  CollarSpec collar = resolution;
  collar.height = report.collar_height;
  collar.validate();
  for (const auto& p : points) report.rows.push_back(pairing_row(p, collar, quad));
  return report;
}

PairingReport pairing_report(const BaseConfig& cfg, const std::vector<double>& grid,
                             const PathConfig& pcfg, const CollarSpec& resolution) {
  std::vector<PathPoint> points;
  for (double t : grid) {
    if (!(t > 0.0 && t < cfg.q())) throw DomainError("t grid must lie in (0, q0)");
    points.push_back(solve_path_point(cfg, t, pcfg));
  }
  return pairing_report(points, resolution, pcfg.solver.quad);
}

}  // namespace lshape
