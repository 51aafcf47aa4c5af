#include "netload/wind.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netload::wind {

double swept_area(double blade_diameter) {
  if (blade_diameter <= 0.0) throw std::invalid_argument("blade diameter must be > 0");
  return std::numbers::pi / 4.0 * blade_diameter * blade_diameter;
}

double TurbineSpec::swept_area() const { return wind::swept_area(blade_diameter); }

double TurbineSpec::rated_power() const {
  return 0.5 * air_density * swept_area() * rated * rated * rated * efficiency;
}

TurbineSpec TurbineSpec::from_rated_power(double rated_power_w, double blade_diameter,
                                          double air_density, double cut_in, double rated,
                                          double cut_out) {
  if (rated_power_w <= 0.0) throw std::invalid_argument("rated power must be > 0");
  TurbineSpec spec;
  spec.blade_diameter = blade_diameter;
  spec.air_density = air_density;
  spec.cut_in = cut_in;
  spec.rated = rated;
  spec.cut_out = cut_out;
  spec.efficiency = rated_power_w /
                    (0.5 * air_density * wind::swept_area(blade_diameter) * rated * rated * rated);
  spec.validate();
  return spec;
}

void TurbineSpec::validate() const {
  if (blade_diameter <= 0.0) throw std::invalid_argument("blade diameter must be > 0");
  if (efficiency <= 0.0 || efficiency > 1.0)
    throw std::invalid_argument("turbine efficiency must be in (0,1]");
  if (air_density <= 0.0) throw std::invalid_argument("air density must be > 0");
  if (!(cut_in >= 0.0 && cut_in < rated && rated < cut_out))
    throw std::invalid_argument("need 0 <= cut_in < rated < cut_out");
}

double turbine_power(double wind_speed, const TurbineSpec& spec) {
  if (!std::isfinite(wind_speed)) throw std::invalid_argument("non-finite wind speed");
  if (wind_speed < spec.cut_in || wind_speed > spec.cut_out) return 0.0;
  if (wind_speed >= spec.rated) return spec.rated_power();
  return 0.5 * spec.air_density * spec.swept_area() * wind_speed * wind_speed * wind_speed *
         spec.efficiency;
}

Vector fleet_wind_power(const Vector& speeds, const TurbineSpec& spec, int count) {
  if (count < 1) throw std::invalid_argument("turbine count must be >= 1");
  spec.validate();
  Vector out(speeds.size());
  for (Eigen::Index i = 0; i < speeds.size(); ++i)
    out(i) = count * turbine_power(speeds(i), spec);
  return out;
}

}  // namespace netload::wind
