#include "netload/types.hpp"

#include <cmath>

namespace netload {

void check_record_fields(const WeatherRecord& rec, bool allow_leap) {
  const int max_day = allow_leap ? 366 : 365;
  if (rec.day < 1 || rec.day > max_day)
    throw ValidationError("day " + std::to_string(rec.day) + " outside [1," +
                          std::to_string(max_day) + "]");
  if (rec.hour < 0 || rec.hour > 23)
    throw ValidationError("hour " + std::to_string(rec.hour) + " outside [0,23]");
  if (!std::isfinite(rec.temp_ambient) || !std::isfinite(rec.wind_speed) ||
      !std::isfinite(rec.irradiance_collector) || !std::isfinite(rec.demand_unit))
    throw ValidationError("non-finite value");
  if (rec.temp_ambient <= 0.0)
    throw ValidationError("temp_K must be > 0, got " + std::to_string(rec.temp_ambient));
  if (rec.wind_speed < 0.0) throw ValidationError("wind_mps must be >= 0");
  if (rec.irradiance_collector < 0.0) throw ValidationError("irradiance_Wm2 must be >= 0");
  if (rec.demand_unit < 0.0) throw ValidationError("demand_kW must be >= 0");
}

void validate_year(const YearDataset& ds, bool allow_leap) {
  const std::size_t expected =
      static_cast<std::size_t>(allow_leap ? kHoursPerLeapYear : kHoursPerYear);
  int day = 1, hour = 0;  // expected next timestamp
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const WeatherRecord& rec = ds[i];
    try {
      check_record_fields(rec, allow_leap);
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(i + 1) + ": " + e.what());
    }
    if (rec.day != day || rec.hour != hour) {
      const bool behind = rec.day < day || (rec.day == day && rec.hour < hour);
      if (behind)
        throw ValidationError("row " + std::to_string(i + 1) +
                              ": duplicate or out-of-order timestamp day " +
                              std::to_string(rec.day) + " hour " + std::to_string(rec.hour));
      throw ValidationError("row " + std::to_string(i + 1) + ": chronological gap, expected day " +
                            std::to_string(day) + " hour " + std::to_string(hour) + ", got day " +
                            std::to_string(rec.day) + " hour " + std::to_string(rec.hour));
    }
    if (++hour == 24) {
      hour = 0;
      ++day;
    }
  }
  if (ds.size() != expected)
    throw ValidationError("expected " + std::to_string(expected) + " rows, got " +
                          std::to_string(ds.size()) +
                          (allow_leap ? "" : " (pass allow_leap for 8784-hour years)"));
}

}  // namespace netload
