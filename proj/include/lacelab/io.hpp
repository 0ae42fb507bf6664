#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacelab/lattice.hpp"

namespace lacelab {

/// RFC-4180 style table with a header row; numbers are written with
/// 17 significant digits and a decimal dot regardless of locale.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row(std::vector<std::string> cells);
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  std::string str() const;
  /// Writes `path` and a sidecar `path.meta.json` holding `meta`.
  void write(const std::filesystem::path& path, const nlohmann::json& meta) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fmt(double v);
std::string fmt(long v);
std::string csv_escape(const std::string& s);

/// 64-bit FNV-1a of the compact dump of `j` (keys sorted), as 16 hex digits.
std::string config_hash(const nlohmann::json& j);
std::uint64_t fnv1a(const std::string& s);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Output directory: LACELAB_OUTPUT_DIR if set, else the current directory.
std::filesystem::path output_dir();

}  // namespace lacelab
