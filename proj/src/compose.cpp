#include "netload/compose.hpp"

#include <stdexcept>

namespace netload {

void PlantCounts::validate() const {
  if (residential_units < 1 || pv_modules < 1 || wind_turbines < 1)
    throw std::invalid_argument("plant counts must all be >= 1");
}

Vector compose_net_load(const Vector& demand_unit_kw, const Vector& wind_total_w,
                        const Vector& solar_total_w, const PlantCounts& counts) {
  counts.validate();
  if (demand_unit_kw.size() != wind_total_w.size() ||
      demand_unit_kw.size() != solar_total_w.size())
    throw std::invalid_argument("compose_net_load: vector length mismatch");
  return counts.residential_units * demand_unit_kw.array() -
         (wind_total_w.array() + solar_total_w.array()) / 1000.0;
}

NetLoadSeries compose_net_load(const YearDataset& ds, const Vector& wind_total_w,
                               const Vector& solar_total_w, const PlantCounts& counts) {
  NetLoadSeries series;
  series.values = compose_net_load(demand_vector(ds), wind_total_w, solar_total_w, counts);
  series.timestamps.reserve(ds.size());
  for (const WeatherRecord& r : ds.records) series.timestamps.emplace_back(r.day, r.hour);
  return series;
}

}  // namespace netload
