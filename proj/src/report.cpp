#include "probreach/report.hpp"

#include <fstream>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace probreach {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw std::logic_error(fmt::format("table row has {} cells, header has {}", row.size(), header.size()));
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string num(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{:.17g}", value);
}
std::string num(std::size_t value) { return std::to_string(value); }
std::string num(long value) { return std::to_string(value); }
std::string num(int value) { return std::to_string(value); }
std::string num(bool value) { return value ? "1" : "0"; }

void ReportBundle::add_csv(const std::string& name, const Table& table) { files[name] = table.to_csv(); }

void ReportBundle::add_json(const std::string& name, const nlohmann::json& doc) { files[name] = doc.dump(2) + "\n"; }

void ReportBundle::add_check(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

bool ReportBundle::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

nlohmann::json emit_results(const ReportBundle& bundle, const std::filesystem::path& out_dir,
                            const nlohmann::json& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  nlohmann::json files = nlohmann::json::object();
  for (const auto& [name, content] : bundle.files) {
    if (name == "manifest.json") throw std::logic_error("bundle may not contain manifest.json");
    const fs::path path = out_dir / name;
    if (path.has_parent_path()) {
      fs::create_directories(path.parent_path(), ec);
      if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
    files[name] = {{"bytes", content.size()}, {"sha256", sha256_hex(content)}};
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : bundle.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});

  nlohmann::json manifest = {{"tool", "probreach"},
                             {"version", kVersion},
                             {"config", config},
                             {"seed", config.value("seed", nlohmann::json(nullptr))},
                             {"checks", checks},
                             {"all_checks_pass", bundle.all_pass()},
                             {"files", files}};
  const fs::path mpath = out_dir / "manifest.json";
  std::ofstream out(mpath, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + mpath.string() + "' for writing");
  out << manifest.dump(2) << "\n";
  if (!out) throw Error("write failed for '" + mpath.string() + "'");
  return manifest;
}

}  // namespace probreach
