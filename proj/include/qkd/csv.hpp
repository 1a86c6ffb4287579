#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qkd {

// Doubles render with 12 significant digits so golden files round-trip
// double precision.
std::string format_number(double value);

// Emits a provenance comment, a header row, then data rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view provenance,
            const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

// FNV-1a 64-bit over a canonical string; used to fingerprint configs.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace qkd
