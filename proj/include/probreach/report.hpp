#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "probreach/core.hpp"

namespace probreach {

/// CSV table with a fixed column order. Cells are pre-formatted strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  explicit Table(std::vector<std::string> columns) : header(std::move(columns)) {}
  /// Throws std::logic_error when the row width differs from the header.
  void add_row(std::vector<std::string> row);
  std::string to_csv() const;
};

/// 17 significant digits, shortest form that round-trips ("{:.17g}").
std::string num(double value);
std::string num(std::size_t value);
std::string num(long value);
std::string num(int value);
std::string num(bool value);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Named output files (relative paths, ordered) plus pass/fail checks.
struct ReportBundle {
  std::map<std::string, std::string> files;
  std::vector<Check> checks;

  void add_csv(const std::string& name, const Table& table);
  void add_json(const std::string& name, const nlohmann::json& doc);
  void add_check(std::string name, bool pass, std::string detail = {});
  bool all_pass() const;
};

nlohmann::json vector_json(const Vector& v);

std::string sha256_hex(std::string_view data);

/// Writes every file of the bundle below out_dir plus manifest.json holding
/// the config, seed, version, checks and per-file SHA-256. No timestamps or
/// host data, so equal inputs give byte-identical trees. Throws Error with the
/// offending path on I/O failure. Returns the manifest.
nlohmann::json emit_results(const ReportBundle& bundle, const std::filesystem::path& out_dir,
                            const nlohmann::json& config);

}  // namespace probreach
