#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace diffwave::io {

/// Self-describing plain-text table:
///
///   # <magic>            e.g. "diffwave-profile v1"
///   key=value            zero or more parameter lines
///   c0 c1 c2 ...         whitespace-separated numeric records, one per line
struct Table {
  std::string magic;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::vector<double>> columns;

  const std::string& param(const std::string& key) const;
  double number(const std::string& key) const;
  bool has(const std::string& key) const;
};

/// Writes to a temporary sibling then renames, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string format_table(const Table& table);
void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);
Table parse_table(const std::string& text);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double x);

}  // namespace diffwave::io
