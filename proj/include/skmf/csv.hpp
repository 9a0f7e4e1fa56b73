#pragma once

// Self-describing CSV: `# key=value` lines, one header row, then data rows.
// Numbers are written with 17 significant digits so a file round-trips.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace skmf {

inline constexpr const char* kVersion = "1.0.0";

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_number(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  /// Metadata lines; only valid before the header.
  CsvWriter& meta(const std::string& key, const std::string& value);
  CsvWriter& meta(const std::string& key, double value);
  CsvWriter& meta(const Metadata& entries);
  CsvWriter& header(const std::vector<std::string>& columns);
  CsvWriter& row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_{0};
  bool header_written_{false};
};

struct CsvTable {
  Metadata metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Metadata value by key, or empty.
  std::string meta(const std::string& key) const;
  /// Index of a column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

/// Parses what CsvWriter produces. Throws std::runtime_error on malformed input.
CsvTable read_csv(std::istream& in);

}  // namespace skmf
