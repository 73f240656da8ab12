#include "gmol_cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gmol::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

int CsvTable::find(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  const int i = find(name);
  if (i < 0) throw InputError("missing column '" + name + "'");
  return columns[static_cast<std::size_t>(i)];
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");

  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!blank(line)) break;
  }
  if (blank(line)) throw InputError("'" + path.string() + "' has no header row");
  table.header = split(line);
  for (const auto& name : table.header) {
    if (name.empty()) throw InputError(path.string() + ":" + std::to_string(line_no) + ": empty column name");
  }
  table.columns.resize(table.header.size());

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split(line);
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != table.header.size()) {
      throw InputError(where + "expected " + std::to_string(table.header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string& c = cells[j];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
        throw InputError(where + "column '" + table.header[j] + "' is not a number: '" + c + "'");
      }
      table.columns[j].push_back(v);
    }
  }
  if (table.rows() == 0) throw InputError("'" + path.string() + "' has no data rows");
  return table;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_number(row[j]);
    out << '\n';
  }
}

}  // namespace gmol::cli
