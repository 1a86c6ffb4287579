#include "qkd/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace qkd {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view provenance,
                     const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  out_ << "# " << provenance << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::logic_error("csv row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace qkd
