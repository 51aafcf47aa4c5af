#pragma once

#include <Eigen/Dense>

#include "netload/dataset.hpp"

namespace netload::wind {

// Piecewise power curve parameters. Rated power is always the cubic-law
// output at the rated speed so the curve is continuous there.
struct TurbineSpec {
  double blade_diameter = 5.6;  // m
  double efficiency = 0.35;     // (0, 1]
  double air_density = 1.225;   // kg/m^3
  double cut_in = 3.0;          // m/s
  double rated = 11.0;          // m/s
  double cut_out = 25.0;        // m/s

  double swept_area() const;
  double rated_power() const;  // W, derived

  // Back-solve the efficiency that yields the given rated power.
  static TurbineSpec from_rated_power(double rated_power_w, double blade_diameter,
                                      double air_density, double cut_in, double rated,
                                      double cut_out);

  void validate() const;
};

double swept_area(double blade_diameter);

// Single-turbine electrical output in watts.
double turbine_power(double wind_speed, const TurbineSpec& spec);

// count identical turbines, elementwise.
Vector fleet_wind_power(const Vector& speeds, const TurbineSpec& spec, int count);

}  // namespace netload::wind
