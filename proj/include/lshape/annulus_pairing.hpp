#pragma once

// Pairing of mu_phi = (z^2 / |z|^2) dzbar/dz with holomorphic quadratic
// differentials f dz^2 on the round annulus 1/r0 < |z| < r0. Writing
// g = z^2 f, the integral is the radial integral of I(rho) / rho with
// I(rho) the angular integral of g, which is independent of rho:
//   pairing = 2 I log r0,  I = 2 pi c_{-2}.

#include <complex>
#include <cstddef>
#include <map>
#include <vector>

namespace lshape {

class RoundAnnulus {
 public:
  /// Throws DomainError unless r0 > 1.
  explicit RoundAnnulus(double r0);

  double r0() const { return r0_; }
  double inner() const { return 1.0 / r0_; }
  double outer() const { return r0_; }

 private:
  double r0_;
};

/// f(z) = sum of c_k z^k over a finite window of k.
class LaurentDifferential {
 public:
  LaurentDifferential() = default;
  explicit LaurentDifferential(std::map<int, std::complex<double>> coefficients);

  static LaurentDifferential monomial(int k, std::complex<double> c = 1.0);

  std::complex<double> coefficient(int k) const;
  void set(int k, std::complex<double> c);

  const std::map<int, std::complex<double>>& coefficients() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  int k_min() const;
  int k_max() const;

  std::complex<double> operator()(std::complex<double> z) const;

 private:
  std::map<int, std::complex<double>> coeffs_;
};

struct PolarQuadrature {
  /// Trapezoid points in theta; 0 picks enough to integrate every term exactly.
  std::size_t theta_points = 0;
  /// Gauss-Legendre panels in rho, geometrically spaced.
  std::size_t radial_panels = 16;
  std::size_t radial_order = 16;

  void validate() const;
};

/// Area integral of (z^2 / |z|^2) f(z) over the annulus.
std::complex<double> pair_mu_phi(const RoundAnnulus& ann, const LaurentDifferential& d,
                                 const PolarQuadrature& cfg = {});

/// Integral over theta in [0, 2 pi) of z^2 f(z) on |z| = rho. Throws DomainError
/// unless 1/r0 < rho < r0.
std::complex<double> angular_average(const RoundAnnulus& ann, const LaurentDifferential& d, double rho,
                                     const PolarQuadrature& cfg = {});

/// Area integral of |f| over the annulus.
double l1_norm(const RoundAnnulus& ann, const LaurentDifferential& d, const PolarQuadrature& cfg = {});

struct DecayRow {
  std::size_t index = 0;
  std::complex<double> c_minus2;
  std::complex<double> pairing;
  /// 4 pi log(r0) c_{-2}.
  std::complex<double> expected;
  double l1 = 0.0;
};

/// Pairings of a sequence of differentials, computed on up to `jobs` threads.
std::vector<DecayRow> decay_check(const RoundAnnulus& ann, const std::vector<LaurentDifferential>& sequence,
                                  const PolarQuadrature& cfg = {}, unsigned jobs = 1);

}  // namespace lshape
