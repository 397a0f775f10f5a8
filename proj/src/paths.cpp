#include "lshape/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "lshape/errors.hpp"

namespace lshape {

BaseConfig::BaseConfig(Rational a, Rational b, Rational q)
    : a0(std::move(a)), b0(std::move(b)), q0(std::move(q)) {
  if (!(a0 > 0)) throw DomainError("base config requires a0 > 0");
  if (!(b0 > 0)) throw DomainError("base config requires b0 > 0");
  if (!(q0 > 0 && q0 < 1)) throw DomainError("base config requires 0 < q0 < 1");
}

LShapeParams sigma1_params(const BaseConfig& cfg, double t) {
  if (!(t >= 0.0 && t < cfg.q())) throw DomainError("path time must satisfy 0 <= t < q0");
  return LShapeParams(cfg.a(), 0.0, cfg.q() - t);
}

PathPoint solve_path_point(const BaseConfig& cfg, double t, const PathConfig& pcfg) {
  const LShapeParams flat = sigma1_params(cfg, t);
  const Prevertices base = solve_parameters(flat, pcfg.solver);
  const double q0 = cfg.q();

  PathPoint point;
  point.t = t;
  point.lambda = base.lambda;
  point.zeta = base.zeta;

  auto sides_at = [&](double r) { return side_functionals({base.lambda, base.zeta, r}, pcfg.solver.quad); };
  auto phi = [&](double r) { return sides_at(r).q() - q0; };

  double r = 0.0;
  if (t > 0.0) {
    // zeta - r must stay right of -1.
    const double r_cap = (base.zeta + 1.0) * (1.0 - 1e-12);
    double lo = 0.0;
    double f_lo = sides_at(0.0).q() - q0;
    double hi = std::min(t, 0.5 * r_cap);
    double f_hi = phi(hi);
    int steps = 0;
    while (f_hi <= 0.0) {
      if (++steps > pcfg.max_bracket_steps || hi >= r_cap) {
        throw SolverError("could not bracket r(t) at t = " + std::to_string(t));
      }
      lo = hi;
      f_lo = f_hi;
      hi = std::min(2.0 * hi, r_cap);
      f_hi = phi(hi);
    }
    std::uintmax_t iterations = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(52);
    const auto [left, right] = boost::math::tools::toms748_solve(phi, lo, hi, f_lo, f_hi, tol, iterations);
    r = 0.5 * (left + right);
  }

  const SideFunctionals sides = sides_at(r);
  point.r = r;
  point.a = sides.a();
  point.b = sides.b();
  point.residual = std::abs(sides.q() - q0);
  point.fol_proxy = fol_proxy(point, cfg);
  if (!(point.residual <= pcfg.identity_tol)) {
    throw SolverError("path point residual " + std::to_string(point.residual) + " exceeds tolerance");
  }
  return point;
}

double fol_proxy(const PathPoint& point, const BaseConfig& cfg) { return point.a + cfg.q() * point.b; }

std::vector<double> t_grid(double t_min, double t_max, int count, bool log_spaced) {
  if (count < 1) throw DomainError("t grid needs at least one sample");
  if (!(t_min > 0.0) || !(t_max >= t_min) || (count > 1 && t_max == t_min)) {
    throw DomainError("t grid requires 0 < t_min < t_max");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = t_max;
    return grid;
  }
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    grid[static_cast<std::size_t>(i)] =
        log_spaced ? std::exp(std::log(t_max) + s * (std::log(t_min) - std::log(t_max)))
                   : t_max + s * (t_min - t_max);
  }
  grid.front() = t_max;
  grid.back() = t_min;
  return grid;
}

std::vector<double> default_t_grid() { return t_grid(1e-4, 1e-1, 24); }

namespace {

// Decades [t_min 10^k, t_min 10^(k+1)] that the grid covers completely.
std::vector<DecadeStats> decades(const std::vector<double>& t, const std::vector<double>& ratio) {
  const double t_min = *std::min_element(t.begin(), t.end());
  const double t_max = *std::max_element(t.begin(), t.end());
  const double slack = 1.0 + 1e-9;
  std::vector<DecadeStats> out;
  for (double lo = t_min; lo * 10.0 <= t_max * slack; lo *= 10.0) {
    DecadeStats d;
    d.t_lo = lo;
    d.t_hi = lo * 10.0;
    double log_sum = 0.0;
    double mn = INFINITY;
    double mx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < lo / slack || t[i] > d.t_hi * slack) continue;
      ++d.samples;
      log_sum += std::log(ratio[i]);
      mn = std::min(mn, ratio[i]);
      mx = std::max(mx, ratio[i]);
    }
    if (d.samples < 2) continue;
    d.mean = std::exp(log_sum / d.samples);
    d.variation = mx / mn - 1.0;
    out.push_back(d);
  }
  return out;
}

}  // namespace

double AsymptoticFit::beta1_stability() const {
  if (beta_decades.size() < 2) return INFINITY;
  return std::abs(beta_decades[1].mean / beta_decades[0].mean - 1.0);
}

AsymptoticFit fit_asymptotics(const std::vector<PathPoint>& points, const BaseConfig& cfg) {
  if (points.size() < 6) throw DomainError("asymptotic fit needs at least 6 points");
  std::vector<PathPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const PathPoint& x, const PathPoint& y) { return x.t > y.t; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(sorted[i].t < sorted[i - 1].t)) throw DomainError("asymptotic fit needs distinct t values");
  }
  if (!(sorted.back().t > 0.0) || !(sorted.front().t < 1.0)) {
    throw DomainError("asymptotic fit needs 0 < t < 1");
  }
  if (sorted.front().t < 100.0 * sorted.back().t * (1.0 - 1e-9)) {
    throw DomainError("asymptotic fit needs at least two decades of t");
  }

  AsymptoticFit fit;
  const double a0 = cfg.a();
  for (const PathPoint& p : sorted) {
    const double scale = std::log(1.0 / p.t) / p.t;
    const double rho = p.r * scale;
    const double beta = (p.fol_proxy - a0) * scale;
    if (!(rho > 0.0) || !(beta > 0.0)) throw DomainError("asymptotic fit needs positive ratios");
    fit.t.push_back(p.t);
    fit.rho.push_back(rho);
    fit.beta.push_back(beta);
    fit.beta_second.push_back(beta / p.t);
  }
  for (std::size_t i = 1; i < fit.rho.size(); ++i) {
    fit.rho_steps.push_back(std::abs(fit.rho[i] / fit.rho[i - 1] - 1.0));
  }
  fit.rho_decades = decades(fit.t, fit.rho);
  fit.beta_decades = decades(fit.t, fit.beta);
  fit.beta_second_decades = decades(fit.t, fit.beta_second);
  if (fit.rho_decades.size() < 2) throw DomainError("asymptotic fit needs at least two decades of t");
  fit.C1 = 1.0 / fit.rho_decades.front().mean;
  fit.beta1 = fit.beta_decades.front().mean;
  fit.beta2 = fit.beta_second_decades.front().mean;
  return fit;
}

}  // namespace lshape
