#include "tact/cli/csv.hpp"

#include <cinttypes>
#include <cstdio>

#ifndef TACT_VERSION
#define TACT_VERSION "0.0.0"
#endif

namespace tact::cli {

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.15g", value);
  return buffer;
}

std::string format_count(long long value) { return std::to_string(value); }

std::string escape_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_preamble(std::ostream& out, const CsvMetadata& meta) {
  out << "# tact " << TACT_VERSION << '\n';
  out << "# command: " << meta.command << '\n';
  if (meta.has_config) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, meta.config_hash);
    out << "# config_hash: fnv1a64:" << hash << '\n';
  } else {
    out << "# config_hash: none (built-in defaults)\n";
  }
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << escape_cell(cells[i]);
  }
  out << '\n';
}

}  // namespace tact::cli
