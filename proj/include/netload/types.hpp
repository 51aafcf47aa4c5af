#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace netload {

inline constexpr int kHoursPerYear = 8760;
inline constexpr int kHoursPerLeapYear = 8784;

// One hourly sample of site weather plus the average demand of a single
// residential unit.
struct WeatherRecord {
  int day = 1;                       // day of year, 1-based
  int hour = 0;                      // 0..23
  double temp_ambient = 288.15;      // K
  double wind_speed = 0.0;           // m/s
  double irradiance_collector = 0.0; // W/m^2 on the collector plane
  double demand_unit = 0.0;          // kW, one residential unit

  bool operator==(const WeatherRecord&) const = default;
};

struct YearDataset {
  std::vector<WeatherRecord> records;

  std::size_t size() const { return records.size(); }
  const WeatherRecord& operator[](std::size_t i) const { return records[i]; }
  WeatherRecord& operator[](std::size_t i) { return records[i]; }

  bool operator==(const YearDataset&) const = default;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field-level checks for a single record; messages carry no row context.
void check_record_fields(const WeatherRecord& rec, bool allow_leap);

// Whole-dataset checks: hourly cadence starting at day 1 hour 0, no gaps or
// duplicates, and the exact year length (8760, or 8784 when allow_leap).
// Diagnostics name the 1-based data row.
void validate_year(const YearDataset& ds, bool allow_leap = false);

}  // namespace netload
