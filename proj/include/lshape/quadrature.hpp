#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace lshape {

/// Tolerances shared by every adaptive integral in the library.
struct QuadratureConfig {
  double abs_tol = 1e-16;
  double rel_tol = 1e-12;
  unsigned max_depth = 40;
  /// |x| beyond which the improper tails switch to the x = ±1/s² chart.
  double tail_cutoff = 2.0;

  /// Smallest relative tolerance binary64 can honour (50 machine epsilons).
  static constexpr double rel_floor = 50.0 * std::numeric_limits<double>::epsilon();

  /// Throws DomainError when a field is outside its documented range.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) integration of a smooth integrand
/// over a finite interval. Bisects the worst interval until the summed error
/// estimate is below max(abs_tol, rel_tol * |I|). A relative tolerance below
/// rel_floor is clamped to it. Throws QuadratureError if an interval deeper than
/// max_depth would be needed or the integrand returns a non-finite value.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureConfig& cfg);

/// Convenience wrapper returning only the value.
double integral(const std::function<double(double)>& f, double lo, double hi,
                const QuadratureConfig& cfg);

/// Nodes and weights of a fixed rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre on [lo, hi]: `panels` equal panels of `order` points each.
Rule composite_gauss(double lo, double hi, std::size_t panels, std::size_t order);

}  // namespace lshape
