#include "skmf/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace skmf {

std::string format_number(double x) {
  if (x == 0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter& CsvWriter::meta(const std::string& key, const std::string& value) {
  if (header_written_) throw std::logic_error("CsvWriter: metadata after the header");
  if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw std::invalid_argument("CsvWriter: metadata must be a single line with '=' only as separator");
  }
  out_ << "# " << key << '=' << value << '\n';
  return *this;
}

CsvWriter& CsvWriter::meta(const std::string& key, double value) { return meta(key, format_number(value)); }

CsvWriter& CsvWriter::meta(const Metadata& entries) {
  for (const auto& [k, v] : entries) meta(k, v);
  return *this;
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& columns) {
  if (header_written_) throw std::logic_error("CsvWriter: header written twice");
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  columns_ = columns.size();
  header_written_ = true;
  return *this;
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  if (!header_written_) throw std::logic_error("CsvWriter: row before the header");
  if (values.size() != columns_) throw std::invalid_argument("CsvWriter: row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
  return *this;
}

std::string CsvTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column named " + name);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_header && line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("read_csv: metadata line without '='");
      table.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!have_header) {
      table.columns = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size()) throw std::runtime_error("read_csv: ragged row");
    std::vector<double> values;
    for (const auto& f : fields) {
      std::size_t used = 0;
      values.push_back(std::stod(f, &used));
      if (used != f.size()) throw std::runtime_error("read_csv: bad number '" + f + "'");
    }
    table.rows.push_back(std::move(values));
  }
  if (!have_header) throw std::runtime_error("read_csv: no header row");
  return table;
}

}  // namespace skmf
