#include "lshape/sc_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "lshape/errors.hpp"

namespace lshape {

void Prevertices::validate() const {
  const double eps = 4.0 * std::numeric_limits<double>::epsilon();
  if (!(std::isfinite(lambda) && std::isfinite(zeta) && std::isfinite(r))) {
    throw DomainError("prevertices must be finite");
  }
  if (!(r >= 0.0)) throw DomainError("prevertices require r >= 0");
  if (!(zeta - r > -1.0 + eps)) throw DomainError(fmt::format("prevertex zeta - r = {:.17g} collides with -1", zeta - r));
  if (!(lambda - zeta > eps)) throw DomainError(fmt::format("prevertices zeta = {:.17g} and lambda = {:.17g} collide", zeta, lambda));
  if (!(lambda < 1.0 - eps)) throw DomainError(fmt::format("prevertex lambda = {:.17g} collides with 1", lambda));
  if (r > 0.0 && !(r > eps * std::max(1.0, std::abs(zeta)))) {
    throw DomainError(fmt::format("prevertices zeta - r and zeta collide (r = {:.3g})", r));
  }
}

namespace {

// Modulus of the SC integrand in charts adapted to each singularity. Positions
// are stored as base + offset so that the gap between zeta - r and zeta is
// exactly r however small it is.
class Integrand {
 public:
  explicit Integrand(const Prevertices& p) {
    add(-1.0, 0.0, -1);
    if (p.r > 0.0) {
      add(p.zeta, -p.r, +1);
      add(p.zeta, 0.0, -1);
    } else {
      add(p.zeta, 0.0, 0);
    }
    add(p.lambda, 0.0, -1);
    add(1.0, 0.0, -1);
  }

  std::size_t index(Prevertex v) const {
    const bool merged = size_ == 4;
    switch (v) {
      case Prevertex::P2: return 0;
      case Prevertex::Q: return 1;
      case Prevertex::P3: return merged ? 1 : 2;
      case Prevertex::P4: return merged ? 2 : 3;
      case Prevertex::P5: return merged ? 3 : 4;
    }
    return 0;
  }

  std::size_t size() const { return size_; }

  double diff(std::size_t i, std::size_t j) const {
    return (base_[i] - base_[j]) + (offset_[i] - offset_[j]);
  }

  double position(std::size_t i) const { return base_[i] + offset_[i]; }

  // 2 s |m(x)| at x = position(anchor) + direction * s^2.
  double chart(std::size_t anchor, int direction, double s) const {
    const double t = direction * s * s;
    double num = 1.0;
    double den = 1.0;
    for (std::size_t j = 0; j < size_; ++j) {
      if (j == anchor) continue;
      const double d = std::abs(diff(anchor, j) + t);
      if (twice_exponent_[j] > 0) num *= d;
      if (twice_exponent_[j] < 0) den *= d;
    }
    double factor = 2.0;
    if (twice_exponent_[anchor] == 0) factor *= s;
    if (twice_exponent_[anchor] > 0) factor *= s * s;
    return factor * std::sqrt(num / den);
  }

  // |m(x)| |dx/ds| at x = side / s^2. The exponents sum to -3/2, which cancels
  // the Jacobian 2 / s^3 exactly.
  double tail(int side, double s) const {
    const double s2 = s * s;
    double num = 1.0;
    double den = 1.0;
    for (std::size_t j = 0; j < size_; ++j) {
      const double d = std::abs(1.0 - side * position(j) * s2);
      if (twice_exponent_[j] > 0) num *= d;
      if (twice_exponent_[j] < 0) den *= d;
    }
    return 2.0 * std::sqrt(num / den);
  }

  double raw(double x) const {
    double num = 1.0;
    double den = 1.0;
    for (std::size_t j = 0; j < size_; ++j) {
      const double d = std::abs(x - position(j));
      if (twice_exponent_[j] > 0) num *= d;
      if (twice_exponent_[j] < 0) den *= d;
    }
    return std::sqrt(num / den);
  }

  double arc(std::size_t anchor, int direction, double length, const QuadratureConfig& cfg) const {
    if (length <= 0.0) return 0.0;
    return integral([&](double s) { return chart(anchor, direction, s); }, 0.0, std::sqrt(length), cfg);
  }

  double between(std::size_t i, const QuadratureConfig& cfg) const {
    const double half = 0.5 * diff(i + 1, i);
    return arc(i, +1, half, cfg) + arc(i + 1, -1, half, cfg);
  }

  double tail_from(int side, double x_abs, const QuadratureConfig& cfg) const {
    return integral([&](double s) { return tail(side, s); }, 0.0, 1.0 / std::sqrt(x_abs), cfg);
  }

  double gap_after(std::size_t i) const {
    return i + 1 < size_ ? diff(i + 1, i) : std::numeric_limits<double>::infinity();
  }
  double gap_before(std::size_t i) const {
    return i > 0 ? diff(i, i - 1) : std::numeric_limits<double>::infinity();
  }

 private:
  void add(double base, double offset, int twice_exponent) {
    base_[size_] = base;
    offset_[size_] = offset;
    twice_exponent_[size_] = twice_exponent;
    ++size_;
  }

  std::array<double, 5> base_{};
  std::array<double, 5> offset_{};
  std::array<int, 5> twice_exponent_{};
  std::size_t size_ = 0;
};

}  // namespace

SideFunctionals side_functionals(const Prevertices& p, const QuadratureConfig& cfg) {
  p.validate();
  cfg.validate();
  const Integrand m(p);
  const double head = cfg.tail_cutoff - 1.0;
  SideFunctionals s;
  s.J = m.arc(m.index(Prevertex::P5), +1, head, cfg) + m.tail_from(+1, cfg.tail_cutoff, cfg);
  s.A = m.arc(m.index(Prevertex::P2), -1, head, cfg) + m.tail_from(-1, cfg.tail_cutoff, cfg);
  s.B = p.r > 0.0 ? m.between(m.index(Prevertex::Q), cfg) : 0.0;
  s.Q = m.between(m.index(Prevertex::P3), cfg);
  return s;
}

double arc_from_prevertex(const Prevertices& p, Prevertex from, int direction, double length,
                          const QuadratureConfig& cfg) {
  p.validate();
  if (direction != 1 && direction != -1) throw DomainError("direction must be +1 or -1");
  if (!(length >= 0.0)) throw DomainError("arc length must be nonnegative");
  const Integrand m(p);
  const std::size_t i = m.index(from);
  const double room = direction > 0 ? m.gap_after(i) : m.gap_before(i);
  if (!(length < room)) throw DomainError("arc reaches the next prevertex");
  return m.arc(i, direction, length, cfg);
}

double tail_arc(const Prevertices& p, int side, double x_abs, const QuadratureConfig& cfg) {
  p.validate();
  if (side != 1 && side != -1) throw DomainError("side must be +1 or -1");
  if (!(x_abs > 1.0)) throw DomainError("tail must start beyond |x| = 1");
  return Integrand(p).tail_from(side, x_abs, cfg);
}

double integrand_modulus(const Prevertices& p, double x) { return Integrand(p).raw(x); }

double relative_residual(const SideFunctionals& sides, const LShapeParams& target) {
  double res = std::max(std::abs(sides.a() - target.a()) / target.a(),
                        std::abs(sides.q() - target.q()) / target.q());
  if (target.b() > 0.0) {
    res = std::max(res, std::abs(sides.b() - target.b()) / target.b());
  } else {
    res = std::max(res, std::abs(sides.b()));
  }
  return res;
}

namespace {

// Unknowns are log-ratios of the prevertex gaps on (-1, 1): with gaps
// g_0..g_{n-1} summing to 2, u_k = log(g_k / g_{n-1}).
class GapCoordinates {
 public:
  explicit GapCoordinates(bool with_r) : with_r_(with_r) {}

  int dimension() const { return with_r_ ? 3 : 2; }

  Prevertices to_prevertices(const Eigen::VectorXd& u) const {
    const int n = dimension() + 1;
    std::array<double, 4> e{};
    double shift = 0.0;
    for (int k = 0; k < n - 1; ++k) shift = std::max(shift, u[k]);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      e[k] = std::exp((k < n - 1 ? u[k] : 0.0) - shift);
      sum += e[k];
    }
    for (int k = 0; k < n; ++k) e[k] = 2.0 * e[k] / sum;
    Prevertices p;
    if (with_r_) {
      p.r = e[1];
      p.zeta = -1.0 + e[0] + e[1];
      p.lambda = 1.0 - e[3];
    } else {
      p.r = 0.0;
      p.zeta = -1.0 + e[0];
      p.lambda = 1.0 - e[2];
    }
    return p;
  }

  Eigen::VectorXd from_prevertices(const Prevertices& p) const {
    Eigen::VectorXd u(dimension());
    if (with_r_) {
      const double last = 1.0 - p.lambda;
      u[0] = std::log((p.zeta - p.r + 1.0) / last);
      u[1] = std::log(p.r / last);
      u[2] = std::log((p.lambda - p.zeta) / last);
    } else {
      const double last = 1.0 - p.lambda;
      u[0] = std::log((p.zeta + 1.0) / last);
      u[1] = std::log((p.lambda - p.zeta) / last);
    }
    return u;
  }

 private:
  bool with_r_;
};

class ParameterProblem {
 public:
  ParameterProblem(const LShapeParams& target, const SolverConfig& cfg)
      : target_(target), cfg_(cfg), coords_(target.b() > 0.0) {}

  const GapCoordinates& coords() const { return coords_; }

  // Log residuals; nullopt when the point cannot be evaluated.
  std::optional<Eigen::VectorXd> residual(const Eigen::VectorXd& u) const {
    try {
      const Prevertices p = coords_.to_prevertices(u);
      const SideFunctionals s = side_functionals(p, cfg_.quad);
      Eigen::VectorXd res(coords_.dimension());
      res[0] = std::log(s.a() / target_.a());
      res[1] = std::log(s.q() / target_.q());
      if (coords_.dimension() == 3) res[2] = std::log(s.b() / target_.b());
      if (!res.allFinite()) return std::nullopt;
      return res;
    } catch (const DomainError&) {
      return std::nullopt;
    } catch (const QuadratureError&) {
      return std::nullopt;
    }
  }

  std::optional<Eigen::MatrixXd> jacobian(const Eigen::VectorXd& u) const {
    const int n = coords_.dimension();
    Eigen::MatrixXd jac(n, n);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd up = u;
      Eigen::VectorXd down = u;
      up[k] += cfg_.fd_step;
      down[k] -= cfg_.fd_step;
      const auto rp = residual(up);
      const auto rm = residual(down);
      if (!rp || !rm) return std::nullopt;
      jac.col(k) = (*rp - *rm) / (2.0 * cfg_.fd_step);
    }
    return jac;
  }

 private:
  LShapeParams target_;
  SolverConfig cfg_;
  GapCoordinates coords_;
};

}  // namespace

Prevertices solve_parameters(const LShapeParams& target, const SolverConfig& cfg,
                             const InitialGuess& guess) {
  cfg.quad.validate();
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw DomainError("solver tolerance must lie in (0,1)");
  const ParameterProblem problem(target, cfg);
  const auto& coords = problem.coords();

  Eigen::VectorXd u = Eigen::VectorXd::Zero(coords.dimension());
  if (guess) {
    Prevertices g = *guess;
    if (target.b() == 0.0) g.r = 0.0;
    try {
      g.validate();
    } catch (const DomainError& e) {
      throw SolverError(std::string("infeasible initial guess: ") + e.what());
    }
    if (target.b() > 0.0 && g.r == 0.0) throw SolverError("initial guess needs r > 0 when b > 0");
    u = coords.from_prevertices(g);
  }

  auto current = problem.residual(u);
  if (!current) throw SolverError("residual cannot be evaluated at the initial guess");

  const double max_step = 3.0;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const double norm = current->lpNorm<Eigen::Infinity>();
    if (norm < cfg.tol) return coords.to_prevertices(u);

    const auto jac = problem.jacobian(u);
    if (!jac) throw SolverError("Jacobian evaluation left the feasible region");

    Eigen::VectorXd step = jac->colPivHouseholderQr().solve(-*current);
    if (!step.allFinite()) step = -jac->transpose() * *current;
    const double biggest = step.lpNorm<Eigen::Infinity>();
    if (biggest > max_step) step *= max_step / biggest;

    bool accepted = false;
    double alpha = 1.0;
    for (int k = 0; k < 50 && !accepted; ++k, alpha *= 0.5) {
      const Eigen::VectorXd trial = u + alpha * step;
      const auto res = problem.residual(trial);
      if (res && res->norm() < (1.0 - 1e-4 * alpha) * current->norm()) {
        u = trial;
        current = res;
        accepted = true;
      }
    }
    if (!accepted) {
      // Levenberg-Marquardt steps with growing damping.
      const Eigen::MatrixXd jtj = jac->transpose() * *jac;
      const Eigen::VectorXd grad = jac->transpose() * *current;
      double mu = 1e-3 * jtj.diagonal().maxCoeff();
      for (int k = 0; k < 40 && !accepted; ++k, mu *= 10.0) {
        const Eigen::MatrixXd damped =
            jtj + mu * Eigen::MatrixXd::Identity(coords.dimension(), coords.dimension());
        const Eigen::VectorXd trial = u - damped.ldlt().solve(grad);
        const auto res = problem.residual(trial);
        if (res && res->norm() < current->norm()) {
          u = trial;
          current = res;
          accepted = true;
        }
      }
    }
    if (!accepted) {
      if (norm < 100.0 * cfg.tol) return coords.to_prevertices(u);
      // Crowded prevertices: storing positions rounds each gap by about eps,
      // a relative gap change of eps / gap, so the residual cannot go lower.
      const Prevertices p = coords.to_prevertices(u);
      double min_gap = std::min({p.zeta_minus_r() + 1.0, p.lambda - p.zeta, 1.0 - p.lambda});
      if (p.r > 0.0) min_gap = std::min(min_gap, p.r);
      const double rounding_floor =
          jac->cwiseAbs().rowwise().sum().maxCoeff() * 2.0 * std::numeric_limits<double>::epsilon() / min_gap;
      if (norm < rounding_floor) return p;
      throw SolverError(fmt::format("Newton stalled at residual {:.3g} after {} iterations", norm, iter));
    }
  }
  const double norm = current->lpNorm<Eigen::Infinity>();
  if (norm < cfg.tol) return coords.to_prevertices(u);
  throw SolverError(fmt::format("residual {:.3g} above tolerance {:.3g} after {} iterations", norm,
                                cfg.tol, cfg.max_iterations));
}

BoundaryChart::BoundaryChart(const Prevertices& p, const QuadratureConfig& cfg) : p_(p), cfg_(cfg) {
  p_.validate();
  cfg_.validate();
  head_ = head_integral(std::sqrt(cfg_.tail_cutoff - 1.0));
  J_ = head_ + tail_integral(1.0 / std::sqrt(cfg_.tail_cutoff));
}

double BoundaryChart::head_integral(double v) const {
  const Integrand m(p_);
  const std::size_t one = m.index(Prevertex::P5);
  return integral([&](double s) { return m.chart(one, +1, s); }, 0.0, v, cfg_);
}

double BoundaryChart::tail_integral(double w) const {
  const Integrand m(p_);
  return integral([&](double s) { return m.tail(+1, s); }, 0.0, w, cfg_);
}

double BoundaryChart::forward(double x) const {
  if (!(x >= 1.0)) throw DomainError("boundary chart is defined on [1, inf]");
  if (x == 1.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x <= cfg_.tail_cutoff) return head_integral(std::sqrt(x - 1.0)) / J_;
  return 1.0 - tail_integral(1.0 / std::sqrt(x)) / J_;
}

double BoundaryChart::density(double x) const {
  if (!(x > 1.0)) throw DomainError("boundary density is defined on (1, inf)");
  return Integrand(p_).raw(x) / J_;
}

namespace {

// Solves F(v) = target for an increasing F on [0, hi] with F(0) = 0, given
// F' > 0. Newton steps that leave the bracket fall back to bisection.
double solve_increasing(const std::function<double(double)>& f, const std::function<double(double)>& df,
                        double target, double hi, double f_hi) {
  double lo = 0.0;
  double v = hi * (target / f_hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fv = f(v) - target;
    if (fv == 0.0) return v;
    if (fv < 0.0) {
      lo = v;
    } else {
      hi = v;
    }
    double next = v - fv / df(v);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double delta = std::abs(next - v);
    v = next;
    if (delta <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(v, 1e-300) || hi - lo <= 0.0) {
      return v;
    }
  }
  throw SolverError("boundary inversion did not converge");
}

}  // namespace

double BoundaryChart::inverse(double s) const {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("inverse boundary map needs s in [0, 1)");
  if (s == 0.0) return 1.0;
  const Integrand m(p_);
  const double target = s * J_;
  if (target <= head_) {
    const std::size_t one = m.index(Prevertex::P5);
    const double v = solve_increasing([&](double v) { return head_integral(v); },
                                      [&](double v) { return m.chart(one, +1, v); }, target,
                                      std::sqrt(cfg_.tail_cutoff - 1.0), head_);
    return 1.0 + v * v;
  }
  const double w_max = 1.0 / std::sqrt(cfg_.tail_cutoff);
  const double rest = (1.0 - s) * J_;
  const double w = solve_increasing([&](double w) { return tail_integral(w); },
                                    [&](double w) { return m.tail(+1, w); }, rest, w_max, J_ - head_);
  return 1.0 / (w * w);
}

double forward_boundary(const Prevertices& p, double x, const QuadratureConfig& cfg) {
  return BoundaryChart(p, cfg).forward(x);
}

double inverse_boundary(const Prevertices& p, double s, const QuadratureConfig& cfg) {
  return BoundaryChart(p, cfg).inverse(s);
}

namespace {

void check_pair(const Prevertices& base, const Prevertices& moved) {
  if (base.r != 0.0) throw DomainError("boundary map base prevertices must have r = 0");
  if (base.lambda != moved.lambda || base.zeta != moved.zeta) {
    throw DomainError("boundary map prevertices must share (lambda, zeta)");
  }
}

}  // namespace

BoundaryMap make_boundary_map(const Prevertices& base, const Prevertices& moved,
                              const QuadratureConfig& cfg) {
  check_pair(base, moved);
  auto f0 = std::make_shared<const BoundaryChart>(base, cfg);
  auto f1 = std::make_shared<const BoundaryChart>(moved, cfg);
  BoundaryMap g;
  g.value = [f0, f1](double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("boundary map is defined on [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    return f1->forward(f0->inverse(x));
  };
  g.derivative = [f0, f1](double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("boundary map is defined on [0, 1]");
    const double ratio = f0->J() / f1->J();
    if (x == 1.0) return ratio;
    const double y = f0->inverse(x);
    const double zeta = f0->prevertices().zeta;
    const double r = f1->prevertices().r;
    return ratio * std::sqrt(1.0 + r / (y - zeta));
  };
  return g;
}

double boundary_map_g(const Prevertices& base, const Prevertices& moved, double x,
                      const QuadratureConfig& cfg) {
  return make_boundary_map(base, moved, cfg).value(x);
}

double boundary_derivative(const Prevertices& base, const Prevertices& moved, double x,
                           const QuadratureConfig& cfg) {
  return make_boundary_map(base, moved, cfg).derivative(x);
}

}  // namespace lshape
