#pragma once

// Run configuration, sweep orchestration and table emission behind the CLI.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lshape/paths.hpp"
#include "lshape/qc_twist.hpp"
#include "lshape/rational.hpp"

namespace lshape {

inline constexpr const char* kToolVersion = "lshape 1.0.0";

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);
std::string to_string(OutputFormat format);

struct GridSpec {
  double t_min = 1e-4;
  double t_max = 1e-1;
  int count = 24;
  bool log_spaced = true;

  /// Strictly decreasing sample times.
  std::vector<double> points() const;
};

struct RunConfig {
  Rational a0{1};
  Rational b0{1};
  Rational q0{1, 2};
  GridSpec grid;
  double quad_tol = 1e-12;
  double solver_tol = 1e-12;
  std::size_t nx = 256;
  std::size_t ny = 64;
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::Csv;

  /// Throws DomainError on a bad grid, tolerance or resolution.
  void validate() const;

  /// Throws DomainError when b0 = 0 (no sigma2 path).
  BaseConfig base() const;
  RationalLShapeParams params() const;
  PathConfig path_config() const;
  CollarSpec collar_resolution() const;

  /// Rationals are written as "p/q" strings. from_json throws DomainError on
  /// unknown keys, wrong types or unparseable values.
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);

  /// 64-bit FNV-1a of the compact canonical JSON, as 16 hex digits.
  std::string hash() const;
};

std::uint64_t fnv1a(const std::string& bytes);

/// Rows keyed by strictly decreasing t. Failed rows keep their t, carry NaN in
/// the other numeric cells and a message in the error column.
struct SweepTable {
  struct Row {
    std::vector<double> values;
    std::string error;
  };

  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  std::size_t failures() const;
  /// Index of a named column; throws DomainError if absent.
  std::size_t column(const std::string& name) const;
  /// Non-failed values of a column, in row order.
  std::vector<double> values(const std::string& name) const;

  /// '#'-prefixed metadata lines, a header and one line per row; numbers in
  /// %.16e so every value carries 17 significant digits.
  std::string to_csv() const;
  nlohmann::json to_json() const;
  std::string render(OutputFormat format) const;
};

/// Formats a double with 17 significant digits; NaN becomes "nan".
std::string format_number(double value);

/// Solves every grid point, fixes the collar at the smallest a(t) and fills the
/// twist columns. Per-row failures are recorded, not thrown.
SweepTable run_sweep(const RunConfig& cfg, unsigned jobs = 1);

/// Writes the table as sweep.csv or sweep.json under cfg.out_dir and returns the path.
std::filesystem::path write_sweep(const SweepTable& table, const RunConfig& cfg);

}  // namespace lshape
