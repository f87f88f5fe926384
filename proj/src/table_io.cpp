#include "diffwave/table_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace diffwave::io {

const std::string& Table::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw std::out_of_range("table has no parameter '" + key + "'");
}

double Table::number(const std::string& key) const { return std::stod(param(key)); }

bool Table::has(const std::string& key) const {
  for (const auto& kv : params) {
    if (kv.first == key) return true;
  }
  return false;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_table(const Table& table) {
  std::string s = "# " + table.magic + "\n";
  for (const auto& [k, v] : table.params) s += k + "=" + v + "\n";
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& col : table.columns) {
    if (col.size() != rows) throw std::invalid_argument("table columns differ in length");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) s += ' ';
      s += format_double(table.columns[c][r]);
    }
    s += '\n';
  }
  return s;
}

void write_table(const std::filesystem::path& path, const Table& table) {
  write_atomic(path, format_table(table));
}

Table parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table table;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error("table: missing '# <magic>' header line");
  }
  table.magic = line.substr(2);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      if (!table.columns.empty()) {
        throw std::runtime_error("table: parameter after data at line " + std::to_string(line_no));
      }
      table.params.emplace_back(line.substr(0, eq), line.substr(eq + 1));
      continue;
    }
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p >= end) break;
      double x = 0.0;
      auto res = std::from_chars(p, end, x);
      if (res.ec != std::errc()) {
        throw std::runtime_error("table: bad number at line " + std::to_string(line_no));
      }
      row.push_back(x);
      p = res.ptr;
    }
    if (table.columns.empty()) table.columns.resize(row.size());
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("table: ragged record at line " + std::to_string(line_no));
    }
    for (std::size_t c = 0; c < row.size(); ++c) table.columns[c].push_back(row[c]);
  }
  return table;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str());
}

}  // namespace diffwave::io
