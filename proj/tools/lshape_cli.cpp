// lshape: command-line front end.
//
// Exit codes: 0 success, 1 verify failure, 2 invalid configuration or usage,
// 3 degenerate twist request (b = 0), 4 solver failure, 5 more than 10% of
// sweep rows failed.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "lshape/acceptance.hpp"
#include "lshape/annulus_pairing.hpp"
#include "lshape/errors.hpp"
#include "lshape/sc_solver.hpp"
#include "lshape/surface_model.hpp"
#include "lshape/sweep.hpp"

namespace {

using namespace lshape;
using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kDegenerate = 3, kSolverFailed = 4, kSweepFailed = 5 };

struct GlobalOptions {
  std::string config_path;
  std::string format;
  std::string out;
  unsigned jobs = 1;
  std::optional<double> tol;
};

RunConfig load_config(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : RunConfig::load(g.config_path);
  if (!g.format.empty()) cfg.format = parse_format(g.format);
  if (!g.out.empty()) cfg.out_dir = g.out;
  if (g.tol) cfg.quad_tol = *g.tol;
  cfg.validate();
  return cfg;
}

// Ordered key/value records rendered as two-column CSV or a JSON object.
struct Report {
  std::vector<std::pair<std::string, json>> fields;

  void add(std::string key, json value) { fields.emplace_back(std::move(key), std::move(value)); }

  std::string render(OutputFormat format) const {
    if (format == OutputFormat::Json) {
      json obj = json::object();
      for (const auto& [k, v] : fields) obj[k] = v;
      return obj.dump(2) + "\n";
    }
    std::string out = "key,value\n";
    for (const auto& [k, v] : fields) out += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    return out;
  }
};

// Header plus rows of preformatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render(OutputFormat format) const {
    if (format == OutputFormat::Json) {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
        arr.push_back(obj);
      }
      return arr.dump(2) + "\n";
    }
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
      out += "\n";
    }
    return out;
  }
};

void emit(const std::string& text, const GlobalOptions& g, const RunConfig& cfg, const std::string& stem) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / (stem + "." + to_string(cfg.format));
  std::ofstream(path, std::ios::binary) << text;
  std::cerr << "wrote " << path.string() << "\n";
}

RationalLShapeParams target_params(const RunConfig& cfg, const std::string& a, const std::string& b,
                                   const std::string& q) {
  return RationalLShapeParams(a.empty() ? cfg.a0 : parse_rational(a), b.empty() ? cfg.b0 : parse_rational(b),
                              q.empty() ? cfg.q0 : parse_rational(q));
}

int cmd_polygon(const GlobalOptions& g, const std::string& a, const std::string& b, const std::string& q, bool twist) {
  const RunConfig cfg = load_config(g);
  const RationalLShapeParams p = target_params(cfg, a, b, q);
  const auto poly = build_polygon(p);
  Report rep;
  rep.add("a", to_string(p.a()));
  rep.add("b", to_string(p.b()));
  rep.add("q", to_string(p.q()));
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& v = poly.vertices[i];
    rep.add("vertex." + to_string(poly.labels[i]), fmt::format("({}; {})", to_string(v.x), to_string(v.y)));
    rep.add("angle_over_half_pi." + to_string(poly.labels[i]), poly.angle_quarters[i]);
  }
  rep.add("polygon_area", to_string(poly.area()));
  const auto surface = build_doubled_surface(p);
  rep.add("surface_area", to_string(surface.area()));
  rep.add("boundary_length", to_string(surface.boundary_length()));
  for (const auto& c : surface.cone_points) {
    rep.add("cone_angle_over_pi." + to_string(c.vertex), c.angle_over_pi);
  }
  if (p.b() == 0) {
    if (twist) throw DegenerateDecomposition("b = 0: no annulus decomposition, so no twist data");
    rep.add("annuli", "single cylinder (b = 0)");
    emit(rep.render(cfg.format), g, cfg, "polygon");
    return kOk;
  }
  const auto annuli = decompose_annuli(p);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& an = annuli.annuli[j];
    const std::string key = fmt::format("annulus{}.", j + 1);
    rep.add(key + "circumference", to_string(an.circumference));
    rep.add(key + "height", to_string(an.height));
    rep.add(key + "modulus", to_string(an.modulus));
    rep.add(key + "area", to_string(an.area));
    rep.add(key + "alpha", to_string(an.weight));
  }
  if (twist) {
    const TwistData td = twist_data(p);
    rep.add("twist.t", to_string(td.t));
    rep.add("twist.n1", td.exponents[0].str());
    rep.add("twist.n2", td.exponents[1].str());
  }
  emit(rep.render(cfg.format), g, cfg, "polygon");
  return kOk;
}

Prevertices parse_guess(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("--guess expects lambda,zeta,r");
    }
  }
  if (v.size() != 3) throw DomainError("--guess expects lambda,zeta,r");
  return {v[0], v[1], v[2]};
}

int cmd_solve(const GlobalOptions& g, const std::string& a, const std::string& b, const std::string& q,
              const std::string& guess) {
  const RunConfig cfg = load_config(g);
  const LShapeParams target = to_double(target_params(cfg, a, b, q));
  const SolverConfig scfg = cfg.path_config().solver;
  InitialGuess init;
  if (!guess.empty()) init = parse_guess(guess);
  const Prevertices p = solve_parameters(target, scfg, init);
  const SideFunctionals s = side_functionals(p, scfg.quad);
  const double residual = relative_residual(s, target);
  Report rep;
  rep.add("lambda", format_number(p.lambda));
  rep.add("zeta", format_number(p.zeta));
  rep.add("r", format_number(p.r));
  rep.add("a", format_number(s.a()));
  rep.add("b", format_number(s.b()));
  rep.add("q", format_number(s.q()));
  rep.add("relative_residual", format_number(residual));
  if (target.b() == 0.0) rep.add("lambda_elliptic", format_number(rectangle_lambda_prediction(target.a())));
  emit(rep.render(cfg.format), g, cfg, "solve");
  if (!(residual <= 1e-8)) {
    std::cerr << "residual " << residual << " above 1e-8\n";
    return kSolverFailed;
  }
  return kOk;
}

int cmd_sweep(const GlobalOptions& g) {
  const RunConfig cfg = load_config(g);
  const SweepTable table = run_sweep(cfg, g.jobs);
  const auto path = write_sweep(table, cfg);
  std::cerr << fmt::format("wrote {} ({} rows, {} failed)\n", path.string(), table.rows.size(), table.failures());
  return 10 * table.failures() > table.rows.size() ? kSweepFailed : kOk;
}

int cmd_verify(const GlobalOptions& g, std::uint64_t seed) {
  AcceptanceOptions options;
  options.config = load_config(g);
  options.jobs = g.jobs;
  options.seed = seed;
  bool all = true;
  for (const auto& r : run_acceptance(options)) {
    std::cout << format_result(r) << "\n";
    all = all && r.pass;
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_annulus(const GlobalOptions& g, double r0, std::uint64_t seed, int samples) {
  const RunConfig cfg = load_config(g);
  const RoundAnnulus ann(r0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<LaurentDifferential> seq;
  std::vector<std::string> labels;
  for (int k = -6; k <= 4; ++k) {
    seq.push_back(LaurentDifferential::monomial(k));
    labels.push_back(fmt::format("z^{}", k));
  }
  for (int i = 0; i < samples; ++i) {
    LaurentDifferential d;
    for (int k = -6; k <= 6; ++k) d.set(k, {u(rng), u(rng)});
    seq.push_back(d);
    labels.push_back(fmt::format("random{}", i));
  }
  for (int n = 1; n <= 4; ++n) {
    seq.push_back(LaurentDifferential({{-2, 1.0 / n}, {3, double(n * n)}}));
    labels.push_back(fmt::format("decay{}", n));
  }
  Table table;
  table.columns = {"name", "c_minus2_re", "c_minus2_im", "pairing_re", "pairing_im", "two_I_log_r0_re",
                   "two_I_log_r0_im", "rel_err", "l1_norm"};
  bool ok = true;
  const auto rows = decay_check(ann, seq, {}, g.jobs);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto I = angular_average(ann, seq[i], std::sqrt(r0));
    const auto identity = 2.0 * I * std::log(r0);
    const double scale = std::max(std::abs(row.pairing), 1.0);
    const double err = std::abs(row.pairing - identity) / scale;
    ok = ok && err <= 1e-8;
    table.rows.push_back({labels[i], format_number(row.c_minus2.real()), format_number(row.c_minus2.imag()),
                          format_number(row.pairing.real()), format_number(row.pairing.imag()),
                          format_number(identity.real()), format_number(identity.imag()), format_number(err),
                          format_number(row.l1)});
  }
  emit(table.render(cfg.format), g, cfg, "annulus");
  return ok ? kOk : kVerifyFailed;
}

int cmd_cover_table(const GlobalOptions& g) {
  const RunConfig cfg = load_config(g);
  Table table;
  table.columns = {"claim", "base_genus", "punctures_single", "punctures_double", "holes_single", "holes_double", "branch_points", "genus", "punctures", "holes", "match"};
  bool ok = true;
  for (const auto& c : published_cover_cases()) {
    const SurfaceType got = cover_type(c.spec);
    const bool match = got == c.expected;
    ok = ok && match;
    const auto& s = c.spec;
    table.rows.push_back({c.claim, std::to_string(s.base_genus), std::to_string(s.punctures_single),
                          std::to_string(s.punctures_double), std::to_string(s.holes_single),
                          std::to_string(s.holes_double), std::to_string(s.branch_points), std::to_string(got.genus),
                          std::to_string(got.punctures), std::to_string(got.holes), match ? "yes" : "no"});
  }
  emit(table.render(cfg.format), g, cfg, "cover_table");
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L-shaped surface toolkit: SC maps, paths, twist maps and checks"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--tol", g.tol, "Relative quadrature tolerance");

  std::string a, b, q, guess;
  bool twist = false;
  auto* polygon = app.add_subcommand("polygon", "Polygon, annuli and twist data");
  polygon->add_option("--a", a, "Height a as p/q");
  polygon->add_option("--b", b, "Height b as p/q");
  polygon->add_option("--q", q, "Width q as p/q");
  polygon->add_flag("--twist", twist, "Report twist data");

  auto* solve = app.add_subcommand("solve", "Solve the SC parameter problem");
  solve->add_option("--a", a, "Target a");
  solve->add_option("--b", b, "Target b");
  solve->add_option("--q", q, "Target q");
  solve->add_option("--guess", guess, "Initial prevertices lambda,zeta,r");

  auto* sweep = app.add_subcommand("sweep", "Sweep the two paths over the t grid");

  std::uint64_t seed = 20240611u;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--seed", seed, "Seed for the randomized criteria");

  double r0 = 2.0;
  int samples = 5;
  auto* annulus = app.add_subcommand("annulus-check", "Round-annulus pairing identity");
  annulus->add_option("--r0", r0, "Outer radius");
  annulus->add_option("--seed", seed, "Seed for random Laurent data");
  annulus->add_option("--samples", samples, "Random Laurent polynomials")->check(CLI::NonNegativeNumber);

  auto* cover = app.add_subcommand("cover-table", "Double-cover types of the published claims");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*polygon) return cmd_polygon(g, a, b, q, twist);
    if (*solve) return cmd_solve(g, a, b, q, guess);
    if (*sweep) return cmd_sweep(g);
    if (*verify) return cmd_verify(g, seed);
    if (*annulus) return cmd_annulus(g, r0, seed, samples);
    if (*cover) return cmd_cover_table(g);
  } catch (const DegenerateDecomposition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const DegenerateMap& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const QuadratureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailed;
  }
  return kInvalid;
}
