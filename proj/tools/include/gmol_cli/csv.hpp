#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmol::cli {

/// Malformed or unreadable input data (exit code 1).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid command-line usage (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric CSV with a header row, stored column-wise.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of `name` in the header, or -1.
  int find(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;
};

/// Reads a comma-separated file with a header. Throws InputError naming the path
/// and, for bad cells, the 1-based line number.
CsvTable read_csv(const std::filesystem::path& path);

/// `%.12g`, the fixed machine precision of every CSV the tool writes.
std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace gmol::cli
