#include "netload/solar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace netload::solar {

void PvArraySpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(rated_power, "rated_power");
  positive(ref_irradiance, "ref_irradiance");
  positive(ref_cell_temp, "ref_cell_temp");
  positive(gamma_ref, "gamma_ref");
  positive(surface_area, "surface_area");
  positive(characteristic_length, "characteristic_length");
  auto unit_interval = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in (0,1]");
  };
  unit_interval(absorptivity, "absorptivity");
  unit_interval(emissivity_cell, "emissivity_cell");
  unit_interval(emissivity_ambient, "emissivity_ambient");
}

double pv_power_raw(double irradiance, double cell_temp, const PvArraySpec& spec) {
  if (!std::isfinite(irradiance) || !std::isfinite(cell_temp))
    throw std::invalid_argument("non-finite pv_power input");
  return irradiance / spec.ref_irradiance * spec.rated_power *
         (1.0 - spec.gamma_ref * (cell_temp - spec.ref_cell_temp));
}

double pv_power(double irradiance, double cell_temp, const PvArraySpec& spec) {
  return std::max(0.0, pv_power_raw(irradiance, cell_temp, spec));
}

double heat_absorption(double irradiance, const PvArraySpec& spec) {
  return spec.absorptivity * irradiance * spec.surface_area;
}

double heat_radiation(double cell_temp, double ambient_temp, const PvArraySpec& spec,
                      const AirProperties& air) {
  const double ta4 = ambient_temp * ambient_temp * ambient_temp * ambient_temp;
  const double tc4 = cell_temp * cell_temp * cell_temp * cell_temp;
  return spec.surface_area * air.stefan_boltzmann *
         (spec.emissivity_ambient * ta4 - spec.emissivity_cell * tc4);
}

double free_convection_coeff(double cell_temp, double ambient_temp, const AirProperties& air,
                             double length) {
  const double dt = std::max(cell_temp - ambient_temp, 0.0);
  const double group = air.gravity * air.density * air.expansion_coeff * air.specific_heat /
                       (air.dynamic_viscosity * air.conductivity);
  return 0.1 * air.conductivity / length * std::cbrt(group) * std::cbrt(dt);
}

double forced_convection_coeff(double wind_speed, const AirProperties& air, double length) {
  if (wind_speed <= 0.0) return 0.0;
  const double re = air.reynolds(wind_speed, length);
  const double pr13 = std::cbrt(air.prandtl());
  const double k_over_l = air.conductivity / length;
  if (wind_speed < kForcedConvectionBranchSpeed)
    return 0.664 * k_over_l * std::sqrt(re) * pr13;  // laminar flat plate
  return 0.037 * k_over_l * std::pow(re, 0.8) * pr13;  // turbulent flat plate
}

HeatBalanceTerms heat_balance_terms(double cell_temp, double irradiance, double ambient_temp,
                                    double wind_speed, const PvArraySpec& spec,
                                    const AirProperties& air) {
  HeatBalanceTerms t;
  t.q_s = heat_absorption(irradiance, spec);
  t.q_r = heat_radiation(cell_temp, ambient_temp, spec, air);
  const double h_c = free_convection_coeff(cell_temp, ambient_temp, air, spec.characteristic_length) +
                     forced_convection_coeff(wind_speed, air, spec.characteristic_length);
  t.q_c = -h_c * spec.surface_area * (cell_temp - ambient_temp);
  t.p_pv = pv_power_raw(irradiance, cell_temp, spec);
  return t;
}

double heat_balance_residual(double cell_temp, double irradiance, double ambient_temp,
                             double wind_speed, const PvArraySpec& spec,
                             const AirProperties& air) {
  return heat_balance_terms(cell_temp, irradiance, ambient_temp, wind_speed, spec, air).residual();
}

double solve_cell_temperature(double irradiance, double ambient_temp, double wind_speed,
                              const PvArraySpec& spec, const AirProperties& air) {
  if (irradiance < 0.0 || ambient_temp <= 0.0 || wind_speed < 0.0)
    throw std::invalid_argument("solve_cell_temperature: bad inputs");

  const double tol = 1e-6 * std::max(1.0, heat_absorption(irradiance, spec));
  auto residual = [&](double t) {
    return heat_balance_residual(t, irradiance, ambient_temp, wind_speed, spec, air);
  };

  double lo = std::max(1.0, ambient_temp - 20.0);
  double hi = ambient_temp + 120.0;
  double f_lo = residual(lo);
  double f_hi = residual(hi);
  if (std::abs(f_lo) <= tol) return lo;
  if (std::abs(f_hi) <= tol) return hi;

  // the residual decreases with cell temperature, so a root needs
  // f_lo > 0 > f_hi; widen symmetrically until the signs differ
  int doublings = 0;
  while ((f_lo > 0.0) == (f_hi > 0.0)) {
    if (++doublings > 5)
      throw SolverError("heat-balance bracket expansion failed (inconsistent parameters?)");
    const double width = hi - lo;
    lo = std::max(1.0, lo - width);
    hi += width;
    f_lo = residual(lo);
    f_hi = residual(hi);
    if (std::abs(f_lo) <= tol) return lo;
    if (std::abs(f_hi) <= tol) return hi;
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = residual(mid);
    if (std::abs(f_mid) <= tol) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  throw SolverError("heat-balance bisection did not converge");
}

Vector array_solar_power(const YearDataset& ds, const PvArraySpec& spec,
                         const AirProperties& air, int count) {
  if (count < 1) throw std::invalid_argument("module count must be >= 1");
  spec.validate();
  Vector out(static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const WeatherRecord& r = ds[i];
    if (r.irradiance_collector <= 0.0) {
      out(static_cast<Eigen::Index>(i)) = 0.0;
      continue;
    }
    const double t_cell =
        solve_cell_temperature(r.irradiance_collector, r.temp_ambient, r.wind_speed, spec, air);
    out(static_cast<Eigen::Index>(i)) =
        count * pv_power(r.irradiance_collector, t_cell, spec);
  }
  return out;
}

}  // namespace netload::solar
