#include "lshape/surface_model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace lshape {

LShapeParams to_double(const RationalLShapeParams& params) {
  return LShapeParams(to_double(params.a()), to_double(params.b()), to_double(params.q()));
}

std::string to_string(Vertex v) {
  switch (v) {
    case Vertex::P5: return "P5";
    case Vertex::P1: return "P1";
    case Vertex::P2: return "P2";
    case Vertex::Q: return "Q";
    case Vertex::P3: return "P3";
    case Vertex::P4: return "P4";
  }
  return "?";
}

TwistData twist_data(const RationalLShapeParams& params) {
  const auto d = decompose_annuli(params);
  TwistData out;
  out.moduli = {d.upper().modulus, d.lower().modulus};
  out.t = lcm(Rational(1) / out.moduli[0], Rational(1) / out.moduli[1]);
  for (std::size_t j = 0; j < 2; ++j) {
    const Rational n = out.moduli[j] * out.t;
    // lcm of the reciprocals is a multiple of each, so this cannot fire.
    if (!is_integer(n)) throw std::logic_error("twist exponent is not integral");
    out.exponents[j] = numerator(n);
  }
  return out;
}

std::pair<double, double> stretch_heights(const LShapeParams& params, std::complex<double> lambda1,
                                          std::complex<double> lambda2) {
  if (!(lambda1.imag() > 0.0) || !(lambda2.imag() > 0.0)) {
    throw DomainError("polyplane coordinates must lie in the upper half-plane");
  }
  return {lambda1.imag() * params.b(), lambda2.imag() * params.a()};
}

PolygonGrid::PolygonGrid(const LShapeParams& params, std::size_t panels_x, std::size_t panels_y,
                         std::size_t order)
    : params_(params) {
  auto add_block = [&](double x0, double x1, double y0, double y1) {
    const Rule rx = composite_gauss(x0, x1, panels_x, order);
    const Rule ry = composite_gauss(y0, y1, panels_y, order);
    for (std::size_t j = 0; j < ry.size(); ++j) {
      for (std::size_t i = 0; i < rx.size(); ++i) {
        nodes_.push_back(Node{rx.nodes[i], ry.nodes[j], rx.weights[i] * ry.weights[j]});
      }
    }
  };
  add_block(0.0, 1.0, 0.0, params.a());
  if (params.b() > 0.0) add_block(0.0, params.q(), params.a(), params.a() + params.b());
}

SampledField sample_field(const PolygonGrid& grid, const DensityFunction& density) {
  SampledField field;
  field.first.reserve(grid.size());
  field.second.reserve(grid.size());
  for (const auto& n : grid.nodes()) {
    field.first.push_back(density(Sheet::First, n.x, n.y));
    field.second.push_back(density(Sheet::Second, n.x, n.y));
  }
  return field;
}

std::complex<double> pair_with_psi(const PolygonGrid& grid, const SampledField& field,
                                   const LShapeParams& params) {
  if (!(grid.params() == params)) throw GridMismatch("grid was built for a different polygon");
  if (field.first.size() != grid.size() || field.second.size() != grid.size()) {
    throw GridMismatch(fmt::format("field has {}+{} samples, grid has {} nodes per sheet",
                                   field.first.size(), field.second.size(), grid.size()));
  }
  std::complex<double> sum = 0.0;
  const auto& nodes = grid.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    sum += nodes[k].weight * (field.first[k] + field.second[k]);
  }
  return sum;
}

SurfaceType cover_type(const CoverSpec& spec) {
  const int fields[] = {spec.base_genus,    spec.punctures_single, spec.punctures_double,
                        spec.holes_single,  spec.holes_double,     spec.branch_points};
  for (int v : fields) {
    if (v < 0) throw DomainError("cover data must be nonnegative");
  }
  const int ramified = spec.branch_points + spec.punctures_single + spec.holes_single;
  if (ramified % 2 != 0) {
    throw DomainError(fmt::format("q + k1 + a1 = {} must be even", ramified));
  }
  if (ramified == 0 && spec.base_genus == 0) {
    throw DomainError("q + k1 + a1 = 0 on a genus-0 base admits no connected double cover");
  }
  return SurfaceType{2 * spec.base_genus - 1 + ramified / 2,
                     spec.punctures_single + 2 * spec.punctures_double,
                     spec.holes_single + 2 * spec.holes_double};
}

const std::vector<CoverCase>& published_cover_cases() {
  // {l, k1, k2, a1, a2, q} -> (g, n, b)
  static const std::vector<CoverCase> cases = {
      {"T^2_{0,2}", {0, 0, 1, 0, 1, 2}, {0, 2, 2}},
      {"T^1_{1,0}", {0, 0, 0, 1, 0, 3}, {1, 0, 1}},
      {"T^1_{1,1}", {0, 1, 0, 1, 0, 2}, {1, 1, 1}},
      {"T^4_{0,0}", {0, 0, 0, 0, 2, 2}, {0, 0, 4}},
      {"T^2_{1,0}", {1, 0, 0, 0, 1, 0}, {1, 0, 2}},
  };
  return cases;
}

}  // namespace lshape
