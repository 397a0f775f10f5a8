#pragma once

// Shared helpers for the unit tests: seeding, random inputs and oracles that
// are independent of the code paths they check.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>

#include "lshape/rational.hpp"
#include "lshape/surface_model.hpp"

namespace lshape {

inline std::uint64_t test_seed() {
  if (const char* env = std::getenv("LSHAPE_SEED")) return std::strtoull(env, nullptr, 10);
  return 20240611u;
}

inline RationalLShapeParams random_rational_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 20);
  std::uniform_int_distribution<int> den(1, 6);
  std::uniform_int_distribution<int> qden(2, 8);
  const int qd = qden(rng);
  std::uniform_int_distribution<int> qnum(1, qd - 1);
  return RationalLShapeParams(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)),
                              Rational(qnum(rng), qd));
}

/// Smallest t = p/d with d <= 100 making m1 t and m2 t integers, by search.
inline std::optional<Rational> brute_force_twist(const Rational& m1, const Rational& m2) {
  const auto u1 = numerator(m1).convert_to<long long>();
  const auto v1 = denominator(m1).convert_to<long long>();
  const auto u2 = numerator(m2).convert_to<long long>();
  const auto v2 = denominator(m2).convert_to<long long>();
  std::optional<Rational> best;
  for (long long d = 1; d <= 100; ++d) {
    for (long long p = 1; p <= 200000; ++p) {
      if (best && Rational(p, d) >= *best) break;
      // (u/v) (p/d) is an integer iff v d divides u p.
      if ((u1 * p) % (v1 * d) == 0 && (u2 * p) % (v2 * d) == 0) {
        best = Rational(p, d);
        break;
      }
    }
  }
  return best;
}

/// Prevertex lambda of the rectangle map with aspect ratio a = height / width:
/// a = K(k') / K(k) with k^2 = (1 + lambda) / 2. Solved by bisection on
/// complete elliptic integrals.
inline double rectangle_lambda(double aspect) {
  auto ratio = [](double lambda) {
    const double k = std::sqrt((1.0 + lambda) / 2.0);
    const double kp = std::sqrt((1.0 - lambda) / 2.0);
    return boost::math::ellint_1(kp) / boost::math::ellint_1(k);
  };
  double lo = -1.0 + 1e-15;
  double hi = 1.0 - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ratio(mid) > aspect) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Horizontal position q = Q / J of the marked point zeta on the top edge of
/// the rectangle map: q = 1 - F(phi, k) / K(k) with sin^2 phi = (zeta + 1)/(lambda + 1).
inline double rectangle_marked_q(double lambda, double zeta) {
  const double k = std::sqrt((1.0 + lambda) / 2.0);
  const double phi = std::asin(std::sqrt((zeta + 1.0) / (lambda + 1.0)));
  return 1.0 - boost::math::ellint_1(k, phi) / boost::math::ellint_1(k);
}

}  // namespace lshape
