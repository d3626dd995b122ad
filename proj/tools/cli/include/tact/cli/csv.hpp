#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tact::cli {

// %.15g; integers print without a decimal point.
std::string format_number(double value);
std::string format_count(long long value);

// Quotes a cell only when it contains a comma, quote or newline.
std::string escape_cell(const std::string& cell);

struct CsvMetadata {
  std::string command;
  std::uint64_t config_hash = 0;
  bool has_config = false;
};

void write_preamble(std::ostream& out, const CsvMetadata& meta);
void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace tact::cli
