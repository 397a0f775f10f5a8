#include "lshape/sweep.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "lshape/errors.hpp"
#include "lshape/parallel.hpp"

namespace lshape {

using nlohmann::json;

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw DomainError("unknown output format '" + name + "' (expected csv or json)");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

std::vector<double> GridSpec::points() const { return t_grid(t_min, t_max, count, log_spaced); }

void RunConfig::validate() const {
  const RationalLShapeParams p = params();
  if (!(grid.t_min > 0.0) || !(grid.t_max < to_double(p.q())) || !(grid.t_min <= grid.t_max)) {
    throw DomainError("t grid must satisfy 0 < t_min <= t_max < q0");
  }
  if (grid.count < 1 || (grid.count > 1 && grid.t_min == grid.t_max)) {
    throw DomainError("t grid needs count >= 1 and distinct endpoints when count > 1");
  }
  for (double tol : {quad_tol, solver_tol}) {
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("tolerances must lie in (0, 1)");
  }
  collar_resolution().validate();
}

RationalLShapeParams RunConfig::params() const { return RationalLShapeParams(a0, b0, q0); }

BaseConfig RunConfig::base() const { return BaseConfig(a0, b0, q0); }

PathConfig RunConfig::path_config() const {
  PathConfig pcfg;
  pcfg.solver.quad.rel_tol = quad_tol;
  pcfg.solver.tol = solver_tol;
  return pcfg;
}

CollarSpec RunConfig::collar_resolution() const { return CollarSpec{1.0, nx, ny}; }

json RunConfig::to_json() const {
  return json{{"a0", lshape::to_string(a0)},
              {"b0", lshape::to_string(b0)},
              {"q0", lshape::to_string(q0)},
              {"grid", {{"t_min", grid.t_min}, {"t_max", grid.t_max}, {"count", grid.count}, {"log_spaced", grid.log_spaced}}},
              {"quad_tol", quad_tol},
              {"solver_tol", solver_tol},
              {"nx", nx},
              {"ny", ny},
              {"out_dir", out_dir},
              {"format", lshape::to_string(format)}};
}

namespace {

Rational rational_field(const json& value, const std::string& key) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  throw DomainError("'" + key + "' must be a \"p/q\" string or an integer");
}

template <class T>
T typed(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw DomainError("config field '" + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "a0") {
      cfg.a0 = rational_field(value, key);
    } else if (key == "b0") {
      cfg.b0 = rational_field(value, key);
    } else if (key == "q0") {
      cfg.q0 = rational_field(value, key);
    } else if (key == "grid") {
      if (!value.is_object()) throw DomainError("'grid' must be an object");
      for (const auto& [gk, gv] : value.items()) {
        if (gk == "t_min") {
          cfg.grid.t_min = typed<double>(gv, gk);
        } else if (gk == "t_max") {
          cfg.grid.t_max = typed<double>(gv, gk);
        } else if (gk == "count") {
          if (!gv.is_number_integer()) throw DomainError("'count' must be an integer");
          cfg.grid.count = gv.get<int>();
        } else if (gk == "log_spaced") {
          cfg.grid.log_spaced = typed<bool>(gv, gk);
        } else {
          throw DomainError("unknown grid key '" + gk + "'");
        }
      }
    } else if (key == "quad_tol") {
      cfg.quad_tol = typed<double>(value, key);
    } else if (key == "solver_tol") {
      cfg.solver_tol = typed<double>(value, key);
    } else if (key == "nx" || key == "ny") {
      if (!value.is_number_unsigned()) throw DomainError("'" + key + "' must be a positive integer");
      (key == "nx" ? cfg.nx : cfg.ny) = value.get<std::size_t>();
    } else if (key == "out_dir") {
      cfg.out_dir = typed<std::string>(value, key);
    } else if (key == "format") {
      cfg.format = parse_format(typed<std::string>(value, key));
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("malformed config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const {
  // Output location and format do not change the numbers.
  json j = to_json();
  j.erase("out_dir");
  j.erase("format");
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{:.16e}", value);
}

std::size_t SweepTable::failures() const {
  std::size_t n = 0;
  for (const auto& row : rows) n += row.error.empty() ? 0 : 1;
  return n;
}

std::size_t SweepTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("no column named " + name);
}

std::vector<double> SweepTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.error.empty()) out.push_back(row.values[c]);
  }
  return out;
}

namespace {

std::string csv_safe(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

std::string SweepTable::to_csv() const {
  std::string out;
  for (const auto& [key, value] : metadata) out += fmt::format("# {}: {}\n", key, value);
  for (const auto& name : columns) out += name + ",";
  out += "error\n";
  for (const auto& row : rows) {
    for (double v : row.values) out += format_number(v) + ",";
    out += csv_safe(row.error) + "\n";
  }
  return out;
}

json SweepTable::to_json() const {
  json meta = json::object();
  for (const auto& [key, value] : metadata) meta[key] = value;
  json data = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      obj[columns[i]] = std::isnan(row.values[i]) ? json(nullptr) : json(row.values[i]);
    }
    obj["error"] = row.error;
    data.push_back(std::move(obj));
  }
  return json{{"metadata", meta}, {"columns", columns}, {"rows", data}};
}

std::string SweepTable::render(OutputFormat format) const {
  return format == OutputFormat::Csv ? to_csv() : to_json().dump(2) + "\n";
}

namespace {

struct Solved {
  std::optional<PathPoint> point;
  std::string error;
};

const std::vector<std::string> kSweepColumns = {
    "t",       "lambda",    "zeta",      "r",        "a",          "b",
    "fol_proxy", "rho",     "sup_mu",    "pairing_abs", "proxy",   "reference",
    "residual", "boundary_shift", "boundary_stretch", "leading_term"};

}  // namespace

SweepTable run_sweep(const RunConfig& cfg, unsigned jobs) {
  cfg.validate();
  const BaseConfig base = cfg.base();
  const PathConfig pcfg = cfg.path_config();
  const std::vector<double> grid = cfg.grid.points();

  const auto solved = parallel_map(grid.size(), jobs, [&](std::size_t i) {
    Solved s;
    try {
      s.point = solve_path_point(base, grid[i], pcfg);
    } catch (const std::exception& e) {
      s.error = e.what();
    }
    return s;
  });

  double collar = std::numeric_limits<double>::infinity();
  for (const auto& s : solved) {
    if (s.point) collar = std::min(collar, s.point->a);
  }
  CollarSpec spec = cfg.collar_resolution();
  spec.height = collar;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  SweepTable table;
  table.columns = kSweepColumns;
  table.rows = parallel_map(grid.size(), jobs, [&](std::size_t i) {
    SweepTable::Row row;
    row.values.assign(kSweepColumns.size(), nan);
    row.values[0] = grid[i];
    if (!solved[i].point) {
      row.error = solved[i].error;
      return row;
    }
    const PathPoint& p = *solved[i].point;
    try {
      const PairingRow twist = pairing_row(p, spec, pcfg.solver.quad);
      const double L = std::log(1.0 / p.t);
      row.values = {p.t,        p.lambda,          p.zeta,           p.r,
                    p.a,        p.b,               p.fol_proxy,      p.r * L / p.t,
                    twist.sup_norm, twist.pairing_abs, twist.proxy,   twist.reference,
                    p.residual, twist.boundary_shift, twist.boundary_stretch, twist.leading_term};
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  });

  table.metadata = {
      {"tool_version", kToolVersion},
      {"config_hash", cfg.hash()},
      {"base", fmt::format("a0={} b0={} q0={}", to_string(cfg.a0), to_string(cfg.b0), to_string(cfg.q0))},
      {"grid", fmt::format("t_min={} t_max={} count={} log_spaced={}", format_number(cfg.grid.t_min),
                           format_number(cfg.grid.t_max), cfg.grid.count, cfg.grid.log_spaced)},
      {"quad_tol", format_number(cfg.quad_tol)},
      {"solver_tol", format_number(cfg.solver_tol)},
      {"identity_tol", format_number(pcfg.identity_tol)},
      {"collar", fmt::format("height={} nx={} ny={}", format_number(collar), cfg.nx, cfg.ny)},
      {"rows", fmt::format("{} ({} failed)", table.rows.size(), table.failures())},
  };
  return table;
}

std::filesystem::path write_sweep(const SweepTable& table, const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DomainError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / (cfg.format == OutputFormat::Csv ? "sweep.csv" : "sweep.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << table.render(cfg.format);
  return path;
}

}  // namespace lshape
