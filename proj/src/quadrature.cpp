#include "lshape/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "lshape/errors.hpp"

namespace lshape {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0 && abs_tol < 1.0)) throw DomainError("quadrature abs_tol must lie in (0,1)");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("quadrature rel_tol must lie in (0,1)");
  if (max_depth < 1) throw DomainError("quadrature max_depth must be at least 1");
  if (!(tail_cutoff > 1.0) || !std::isfinite(tail_cutoff)) {
    throw DomainError("quadrature tail_cutoff must be a finite number > 1");
  }
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  unsigned depth;

  bool operator<(const Panel& other) const { return error < other.error; }
};

// Kronrod abscissae are stored for x >= 0 starting at x = 0. With an even
// Gauss order the odd indices are the shared Gauss points.
Panel apply_rule(const std::function<double(double)>& f, double lo, double hi, unsigned depth,
                 std::size_t& evaluations) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double kronrod = 0.0;
  double gauss = 0.0;
  for (std::size_t i = 0; i < xk.size(); ++i) {
    double sum;
    if (xk[i] == 0.0) {
      sum = f(mid);
      ++evaluations;
    } else {
      sum = f(mid - half * xk[i]) + f(mid + half * xk[i]);
      evaluations += 2;
    }
    if (!std::isfinite(sum)) {
      throw QuadratureError(fmt::format("non-finite integrand on [{:.17g}, {:.17g}]", lo, hi));
    }
    kronrod += wk[i] * sum;
    if (i % 2 == 1) gauss += wg[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{lo, hi, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureConfig& cfg) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) throw DomainError("integration bounds must be finite");
  if (lo == hi) return {};
  if (hi < lo) {
    auto flipped = integrate(f, hi, lo, cfg);
    flipped.value = -flipped.value;
    return flipped;
  }
  const double rel_tol = std::max(cfg.rel_tol, QuadratureConfig::rel_floor);

  QuadratureResult out;
  std::priority_queue<Panel> panels;
  panels.push(apply_rule(f, lo, hi, 0, out.evaluations));
  double total = panels.top().value;
  double error = panels.top().error;

  while (error > std::max(cfg.abs_tol, rel_tol * std::abs(total))) {
    Panel worst = panels.top();
    // Once a panel's error is at the rounding level of its own value nothing
    // more can be gained from splitting it.
    if (worst.error <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(worst.value)) break;
    if (worst.depth >= cfg.max_depth) {
      throw QuadratureError(fmt::format(
          "no convergence at depth {} on [{:.17g}, {:.17g}]: error {:.3g} vs requested {:.3g}",
          cfg.max_depth, lo, hi, error, std::max(cfg.abs_tol, rel_tol * std::abs(total))));
    }
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Panel left = apply_rule(f, worst.lo, mid, worst.depth + 1, out.evaluations);
    Panel right = apply_rule(f, mid, worst.hi, worst.depth + 1, out.evaluations);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  for (const auto& p : all) {
    total += p.value;
    error += p.error;
  }
  out.value = total;
  out.error = error;
  return out;
}

double integral(const std::function<double(double)>& f, double lo, double hi,
                const QuadratureConfig& cfg) {
  return integrate(f, lo, hi, cfg).value;
}

Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  Rule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

Rule composite_gauss(double lo, double hi, std::size_t panels, std::size_t order) {
  if (panels == 0) throw DomainError("composite rule needs at least one panel");
  if (!(hi > lo)) throw DomainError("composite rule needs lo < hi");
  const Rule base = gauss_legendre(order);
  Rule rule;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  const double width = (hi - lo) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    for (std::size_t k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[k]);
      rule.weights.push_back(0.5 * width * base.weights[k]);
    }
  }
  return rule;
}

}  // namespace lshape
