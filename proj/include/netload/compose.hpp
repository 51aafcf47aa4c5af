#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "netload/dataset.hpp"

namespace netload {

struct PlantCounts {
  int residential_units = 60;
  int pv_modules = 100;
  int wind_turbines = 3;

  void validate() const;
};

struct NetLoadSeries {
  Vector values;                                // kW, signed
  std::vector<std::pair<int, int>> timestamps;  // (day, hour)
};

// net[t] = units * demand_unit[t] - (wind_total[t] + solar_total[t]) / 1000.
// Demand is per-unit kW; wind and solar are fleet totals in watts.
Vector compose_net_load(const Vector& demand_unit_kw, const Vector& wind_total_w,
                        const Vector& solar_total_w, const PlantCounts& counts);

NetLoadSeries compose_net_load(const YearDataset& ds, const Vector& wind_total_w,
                               const Vector& solar_total_w, const PlantCounts& counts);

}  // namespace netload
