#include "lshape/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "lshape/annulus_pairing.hpp"
#include "lshape/errors.hpp"
#include "lshape/paths.hpp"
#include "lshape/sc_solver.hpp"
#include "lshape/surface_model.hpp"

namespace lshape {

namespace {

constexpr double kPi = std::numbers::pi;

double spread(const std::vector<double>& v) {
  if (v.empty()) return INFINITY;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

QuadratureConfig quad_of(const RunConfig& cfg) {
  QuadratureConfig q;
  q.rel_tol = cfg.quad_tol;
  return q;
}

SolverConfig solver_of(const RunConfig& cfg) {
  SolverConfig s;
  s.quad = quad_of(cfg);
  s.tol = cfg.solver_tol;
  return s;
}

CriterionResult quadrature_self_check(const RunConfig& cfg) {
  CriterionResult res{0, "quadrature convergence", false, ""};
  const double lambda = 0.3;
  const auto sides = side_functionals({lambda, -0.2, 0.0}, quad_of(cfg));
  const double exact = std::sqrt(2.0) * boost::math::ellint_1(std::sqrt((1.0 + lambda) / 2.0));
  const double err = std::abs(sides.J / exact - 1.0);
  const double floor = QuadratureConfig::rel_floor;
  res.pass = cfg.quad_tol >= floor && err <= cfg.quad_tol;
  if (cfg.quad_tol < floor) {
    res.measured = fmt::format(
        "requested rel tol {:.1e} is below the binary64 floor {:.2e}; integrals were run at the floor "
        "(achieved {:.1e} on the rectangle reference)",
        cfg.quad_tol, floor, err);
  } else {
    res.measured = fmt::format("rectangle reference error {:.2e} <= {:.1e}", err, cfg.quad_tol);
  }
  return res;
}

CriterionResult sc_round_trip(const RunConfig& cfg, std::mt19937_64& rng) {
  CriterionResult res{1, "SC round trip", true, ""};
  std::uniform_real_distribution<double> ua(0.5, 2.0), ub(0.0, 1.0), uq(0.2, 0.8);
  double worst = 0.0;
  double slowest = 0.0;
  int failed = 0;
  for (int i = 0; i < 20; ++i) {
    const double a = ua(rng);
    const double b = ub(rng);
    const LShapeParams target(a, b, uq(rng));
    const auto start = std::chrono::steady_clock::now();
    try {
      const Prevertices p = solve_parameters(target, solver_of(cfg));
      worst = std::max(worst, relative_residual(side_functionals(p, quad_of(cfg)), target));
    } catch (const std::exception&) {
      ++failed;
    }
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  res.pass = failed == 0 && worst <= 1e-8 && slowest < 5.0;
  res.measured = fmt::format("20 targets, worst rel err {:.2e}, slowest {:.3f} s, {} solver failures", worst,
                             slowest, failed);
  return res;
}

CriterionResult rectangle_oracle(const RunConfig& cfg) {
  CriterionResult res{2, "rectangle oracle", true, ""};
  double worst = 0.0;
  try {
    for (double a : {0.5, 0.8, 1.0, 1.5, 2.0}) {
      for (double q : {0.3, 0.5, 0.7}) {
        const Prevertices p = solve_parameters(LShapeParams(a, 0.0, q), solver_of(cfg));
        worst = std::max(worst, std::abs(p.lambda - rectangle_lambda_prediction(a)));
      }
    }
    res.pass = worst <= 1e-8;
    res.measured = fmt::format("15 targets, max |lambda - elliptic| = {:.2e}", worst);
  } catch (const std::exception& e) {
    res.pass = false;
    res.measured = e.what();
  }
  return res;
}

CriterionResult claims_table() {
  CriterionResult res{3, "cover claims table", true, ""};
  int matched = 0;
  std::string detail;
  for (const auto& c : published_cover_cases()) {
    const SurfaceType got = cover_type(c.spec);
    const bool ok = got == c.expected;
    matched += ok ? 1 : 0;
    res.pass = res.pass && ok;
    detail += fmt::format(" {}=({},{},{})", c.claim, got.genus, got.punctures, got.holes);
  }
  res.measured = fmt::format("{}/{} cases:{}", matched, published_cover_cases().size(), detail);
  return res;
}

// Smallest p/d with d <= 100 making both m1 p/d and m2 p/d integers.
std::optional<Rational> brute_force_twist(const Rational& m1, const Rational& m2) {
  const auto u1 = numerator(m1).convert_to<long long>();
  const auto v1 = denominator(m1).convert_to<long long>();
  const auto u2 = numerator(m2).convert_to<long long>();
  const auto v2 = denominator(m2).convert_to<long long>();
  std::optional<Rational> best;
  for (long long d = 1; d <= 100; ++d) {
    for (long long p = 1; p <= 1000000; ++p) {
      if (best && Rational(p, d) >= *best) break;
      if ((u1 * p) % (v1 * d) == 0 && (u2 * p) % (v2 * d) == 0) {
        best = Rational(p, d);
        break;
      }
    }
  }
  return best;
}

CriterionResult twist_data_check(std::mt19937_64& rng) {
  CriterionResult res{4, "twist data", true, ""};
  std::uniform_int_distribution<int> num(1, 20), den(1, 6), qden(2, 8);
  int agreed = 0;
  for (int i = 0; i < 10; ++i) {
    const int qd = qden(rng);
    std::uniform_int_distribution<int> qnum(1, qd - 1);
    const int an = num(rng);
    const int ad = den(rng);
    const int bn = num(rng);
    const int bd = den(rng);
    const RationalLShapeParams p(Rational(an, ad), Rational(bn, bd), Rational(qnum(rng), qd));
    const TwistData td = twist_data(p);
    bool ok = true;
    for (std::size_t j = 0; j < 2; ++j) ok = ok && is_integer(td.moduli[j] * td.t) && td.moduli[j] * td.t == td.exponents[j];
    const auto brute = brute_force_twist(td.moduli[0], td.moduli[1]);
    ok = ok && brute && *brute == td.t;
    agreed += ok ? 1 : 0;
    if (!ok) {
      res.pass = false;
      res.measured += fmt::format(" mismatch at ({}, {}, {});", to_string(p.a()), to_string(p.b()), to_string(p.q()));
    }
  }
  res.measured = fmt::format("{}/10 triples agree with brute force over d <= 100", agreed) + res.measured;
  return res;
}

std::vector<PathPoint> points_of(const SweepTable& table) {
  std::vector<PathPoint> pts;
  const std::size_t ct = table.column("t"), cr = table.column("r"), cf = table.column("fol_proxy");
  const std::size_t ca = table.column("a"), cb = table.column("b");
  const std::size_t cl = table.column("lambda"), cz = table.column("zeta");
  for (const auto& row : table.rows) {
    if (!row.error.empty()) continue;
    PathPoint p;
    p.t = row.values[ct];
    p.r = row.values[cr];
    p.fol_proxy = row.values[cf];
    p.a = row.values[ca];
    p.b = row.values[cb];
    p.lambda = row.values[cl];
    p.zeta = row.values[cz];
    pts.push_back(p);
  }
  return pts;
}

CriterionResult radius_asymptotics(const SweepTable& table, const AsymptoticFit& fit) {
  CriterionResult res{5, "r(t) asymptotics", true, ""};
  bool positive = true;
  for (double rho : fit.rho) positive = positive && rho > 0.0;
  bool decreasing = true;
  std::string decades;
  for (std::size_t i = 0; i < fit.rho_decades.size(); ++i) {
    const auto& d = fit.rho_decades[i];
    decades += fmt::format(" [{:.0e},{:.0e}]={:.2f}%", d.t_lo, d.t_hi, 100.0 * d.variation);
    if (i > 0) decreasing = decreasing && fit.rho_decades[i - 1].variation < d.variation;
  }
  const double finest = fit.rho_decades.front().variation;
  res.pass = table.failures() == 0 && positive && decreasing && finest < 0.15;
  res.measured = fmt::format("rho variation per decade{}; C1 ~ {:.4f}; {} failed rows", decades, fit.C1,
                             table.failures());
  return res;
}

CriterionResult boundary_map_check(const SweepTable& table, const RunConfig& cfg) {
  CriterionResult res{6, "boundary map", true, ""};
  const auto r = table.values("r");
  const auto shift = table.values("boundary_shift");
  const auto stretch = table.values("boundary_stretch");
  std::vector<double> s_ratio, d_ratio;
  for (std::size_t i = 0; i < r.size(); ++i) {
    s_ratio.push_back(shift[i] / r[i]);
    d_ratio.push_back(stretch[i] / r[i]);
  }
  // Central differences of g against the closed-form g'.
  double worst_fd = 0.0;
  const auto pts = points_of(table);
  const QuadratureConfig quad = quad_of(cfg);
  for (std::size_t k : {std::size_t{0}, pts.size() / 2, pts.size() - 1}) {
    if (k >= pts.size()) continue;
    const BoundaryMap g = make_boundary_map(pts[k].base(), pts[k].moved(), quad);
    const double h = 1e-4;
    for (double x = 0.05; x < 0.96; x += 0.1) {
      const double fd = (g.value(x + h) - g.value(x - h)) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - g.derivative(x)));
    }
  }
  res.pass = !r.empty() && spread(s_ratio) < 2.0 && spread(d_ratio) < 2.0 && worst_fd <= 1e-6;
  res.measured = fmt::format("sup|g-x|/r spread {:.3f}, sup|g'-1|/r spread {:.3f}, max |g' - FD| {:.2e}",
                             spread(s_ratio), spread(d_ratio), worst_fd);
  return res;
}

// Rows with t in the finest `decades` decades of the grid, in decreasing t.
std::vector<std::size_t> finest_rows(const SweepTable& table, double decades) {
  const auto t = table.values("t");
  std::vector<std::size_t> idx;
  if (t.empty()) return idx;
  const double t_min = *std::min_element(t.begin(), t.end());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= t_min * std::pow(10.0, decades) * (1.0 + 1e-9)) idx.push_back(i);
  }
  return idx;
}

CriterionResult beltrami_bounds(const SweepTable& table) {
  CriterionResult res{7, "Beltrami bounds", true, ""};
  const auto r = table.values("r");
  const auto sup = table.values("sup_mu");
  const auto pair = table.values("pairing_abs");
  const auto lead = table.values("leading_term");
  std::vector<double> sup_ratio;
  double worst_lead = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sup_ratio.push_back(sup[i] / r[i]);
    worst_lead = std::max(worst_lead, std::abs(lead[i]));
  }
  bool monotone = true;
  const auto fine = finest_rows(table, 1.0);
  for (std::size_t k = 1; k < fine.size(); ++k) {
    monotone = monotone && pair[fine[k]] / r[fine[k]] < pair[fine[k - 1]] / r[fine[k - 1]];
  }
  const double max_sup = sup_ratio.empty() ? INFINITY : *std::max_element(sup_ratio.begin(), sup_ratio.end());
  res.pass = !r.empty() && spread(sup_ratio) < 2.0 && max_sup < 1.0 && worst_lead < 1e-10 && monotone && fine.size() >= 2;
  res.measured = fmt::format(
      "sup|mu|/r in [{:.4f}, {:.4f}], max |Fubini term| {:.1e}, |int mu psi|/r decreasing over finest decade: {}",
      max_sup / spread(sup_ratio), max_sup, worst_lead, monotone ? "yes" : "no");
  return res;
}

CriterionResult pairing_proxy(const SweepTable& table) {
  CriterionResult res{8, "twist pairing proxy", true, ""};
  const auto proxy = table.values("proxy");
  const auto ref = table.values("reference");
  const auto sup = table.values("sup_mu");
  std::vector<double> ratio;
  for (std::size_t i : finest_rows(table, 2.0)) ratio.push_back(proxy[i] / ref[i]);
  const double max_sup = sup.empty() ? INFINITY : *std::max_element(sup.begin(), sup.end());
  res.pass = ratio.size() >= 2 && spread(ratio) < 3.0 && max_sup < 0.5;
  res.measured = fmt::format("proxy/reference spread {:.3f} over the finest two decades ({} rows); max sup|mu| {:.2e}",
                             spread(ratio), ratio.size(), max_sup);
  return res;
}

CriterionResult annulus_identity(std::mt19937_64& rng) {
  CriterionResult res{9, "annulus identity", true, ""};
  std::uniform_real_distribution<double> u(-1.0, 1.0), ur(1.2, 3.2);
  double worst_identity = 0.0;
  double worst_rho = 0.0;
  for (int i = 0; i < 20; ++i) {
    LaurentDifferential d;
    for (int k = -6; k <= 6; ++k) d.set(k, {u(rng), u(rng)});
    const RoundAnnulus ann(ur(rng));
    const auto value = pair_mu_phi(ann, d);
    const auto I = angular_average(ann, d, std::sqrt(ann.r0()));
    worst_identity = std::max(worst_identity, std::abs(value - 2.0 * I * std::log(ann.r0())) / std::abs(value));
    const RoundAnnulus two(2.0);
    worst_rho = std::max(worst_rho, std::abs(angular_average(two, d, 1.1) - angular_average(two, d, 1.9)));
  }
  const RoundAnnulus two(2.0);
  const double exact = 4.0 * kPi * std::log(2.0);
  const double mono = std::abs(pair_mu_phi(two, LaurentDifferential::monomial(-2)) - exact) / exact;
  double others = 0.0;
  for (int k = -10; k <= 10; ++k) {
    if (k != -2) others = std::max(others, std::abs(pair_mu_phi(two, LaurentDifferential::monomial(k))));
  }
  res.pass = worst_identity <= 1e-8 && mono <= 1e-13 && others <= 1e-10 && worst_rho <= 1e-10;
  res.measured = fmt::format(
      "identity rel err {:.1e}, k=-2 rel err {:.1e}, max |k != -2| {:.1e}, rho drift {:.1e}", worst_identity, mono,
      others, worst_rho);
  return res;
}

CriterionResult fol_expansion(const AsymptoticFit& fit) {
  CriterionResult res{10, "Fol proxy expansion", true, ""};
  const double variation = fit.beta_decades.empty() ? INFINITY : fit.beta_decades.front().variation;
  const double stability = fit.beta1_stability();
  res.pass = variation < 0.2 && stability < 0.1;
  const double second = fit.beta_second_decades.empty() ? INFINITY : fit.beta_second_decades.front().variation;
  res.measured = fmt::format(
      "beta1 estimate {:.3e}; (folProxy-a0)log(1/t)/t varies {:.1f}% over the finest decade, decade means differ by "
      "{:.1f}%; (folProxy-a0)log(1/t)/t^2 ~ {:.4f} varies {:.1f}%",
      fit.beta1, 100.0 * variation, 100.0 * stability, fit.beta2, 100.0 * second);
  return res;
}

CriterionResult determinism(const RunConfig& cfg, unsigned jobs, const SweepTable& first) {
  CriterionResult res{11, "determinism", true, ""};
  const SweepTable second = run_sweep(cfg, std::max(2u, jobs));
  const bool csv = first.to_csv() == second.to_csv();
  const bool json = first.to_json().dump() == second.to_json().dump();
  res.pass = csv && json;
  res.measured = fmt::format("second run with {} jobs: CSV {}, JSON {}", std::max(2u, jobs),
                             csv ? "identical" : "differs", json ? "identical" : "differs");
  return res;
}

}  // namespace

double rectangle_lambda_prediction(double a) {
  if (!(a > 0.0)) throw DomainError("rectangle aspect must be positive");
  auto residual = [a](double lambda) {
    const double k = std::sqrt((1.0 + lambda) / 2.0);
    const double kp = std::sqrt((1.0 - lambda) / 2.0);
    return std::log(boost::math::ellint_1(kp) / boost::math::ellint_1(k)) - std::log(a);
  };
  const double edge = 1.0 - 1e-15;
  std::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(residual, -edge, edge,
                                                          boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (lo + hi);
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const RunConfig& cfg = options.config;
  cfg.validate();
  std::mt19937_64 rng(options.seed);
  std::vector<CriterionResult> out;
  out.push_back(quadrature_self_check(cfg));
  out.push_back(sc_round_trip(cfg, rng));
  out.push_back(rectangle_oracle(cfg));
  out.push_back(claims_table());
  out.push_back(twist_data_check(rng));

  const SweepTable table = run_sweep(cfg, 1);
  std::optional<AsymptoticFit> fit;
  std::string fit_error;
  try {
    fit = fit_asymptotics(points_of(table), cfg.base());
  } catch (const std::exception& e) {
    fit_error = e.what();
  }
  if (fit) {
    out.push_back(radius_asymptotics(table, *fit));
  } else {
    out.push_back({5, "r(t) asymptotics", false, "fit failed: " + fit_error});
  }
  out.push_back(boundary_map_check(table, cfg));
  out.push_back(beltrami_bounds(table));
  out.push_back(pairing_proxy(table));
  out.push_back(annulus_identity(rng));
  if (fit) {
    out.push_back(fol_expansion(*fit));
  } else {
    out.push_back({10, "Fol proxy expansion", false, "fit failed: " + fit_error});
  }
  out.push_back(determinism(cfg, options.jobs, table));
  return out;
}

std::string format_result(const CriterionResult& r) {
  const std::string label = r.id == 0 ? std::string("Q") : std::to_string(r.id);
  return fmt::format("[{}] {:>2} {}: {}", r.pass ? "PASS" : "FAIL", label, r.name, r.measured);
}

}  // namespace lshape
