#pragma once

#include <iosfwd>
#include <string>

#include "netload/types.hpp"

namespace netload {

// Column layout of the hourly time-series files:
//   day,hour,temp_K,wind_mps,irradiance_Wm2,demand_kW
inline constexpr const char* kCsvHeader = "day,hour,temp_K,wind_mps,irradiance_Wm2,demand_kW";

struct CsvError : std::runtime_error {
  explicit CsvError(std::size_t row_, const std::string& what_)
      : std::runtime_error("row " + std::to_string(row_) + ": " + what_), row(row_) {}
  std::size_t row;  // 1-based data row (0 = header)
};

YearDataset parse_tmy_csv(std::istream& in, bool allow_leap = false);
YearDataset parse_tmy_csv(const std::string& text, bool allow_leap = false);
YearDataset load_tmy_csv(const std::string& path, bool allow_leap = false);

// Shortest round-trip formatting, so parse(serialize(ds)) == ds exactly.
void serialize_tmy_csv(std::ostream& out, const YearDataset& ds);
std::string serialize_tmy_csv(const YearDataset& ds);

// Helper shared by all CSV emitters: shortest representation that parses
// back to the identical double.
std::string format_double(double v);

}  // namespace netload
