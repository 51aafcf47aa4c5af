#pragma once

#include <Eigen/Dense>

#include "netload/dataset.hpp"

namespace netload::solar {

// Electrical and thermal description of one PV module.
struct PvArraySpec {
  double rated_power = 430.0;       // W per module at reference conditions
  double ref_irradiance = 1000.0;   // W/m^2
  double ref_cell_temp = 298.15;    // K
  double gamma_ref = 0.004;         // 1/K, output derating per kelvin
  double surface_area = 2.06;       // m^2 per module
  double absorptivity = 0.9;
  double emissivity_cell = 0.9;
  double emissivity_ambient = 0.9;
  double characteristic_length = 1.0;  // m, convection length scale

  void validate() const;
};

// Air film properties, fixed (no temperature dependence). Defaults are
// dry-air textbook values near 300 K.
struct AirProperties {
  double conductivity = 0.0263;        // W/(m K)
  double density = 1.1774;             // kg/m^3
  double expansion_coeff = 1.0 / 300;  // 1/K
  double specific_heat = 1005.7;       // J/(kg K)
  double dynamic_viscosity = 1.846e-5; // Pa s
  double gravity = 9.81;               // m/s^2
  double stefan_boltzmann = 5.669e-8;  // W/(m^2 K^4)

  double prandtl() const { return dynamic_viscosity * specific_heat / conductivity; }
  double reynolds(double wind_speed, double length) const {
    return density * wind_speed * length / dynamic_viscosity;
  }
};

// Value of each term of the steady-state balance at a given cell temperature.
struct HeatBalanceTerms {
  double q_s = 0.0;   // absorbed, W
  double q_r = 0.0;   // net radiation, W (signed)
  double q_c = 0.0;   // convection, W (signed)
  double p_pv = 0.0;  // electrical, W (linear model, unclamped)
  double residual() const { return q_s + q_c + q_r - p_pv; }
};

// Linear irradiance/temperature output model, unclamped (can go negative at
// extreme cell temperatures).
double pv_power_raw(double irradiance, double cell_temp, const PvArraySpec& spec);

// Pipeline output: the same model clamped below at zero.
double pv_power(double irradiance, double cell_temp, const PvArraySpec& spec);

double heat_absorption(double irradiance, const PvArraySpec& spec);

double heat_radiation(double cell_temp, double ambient_temp, const PvArraySpec& spec,
                      const AirProperties& air);

// Buoyant free-convection coefficient; zero when the cell is no warmer than
// ambient.
double free_convection_coeff(double cell_temp, double ambient_temp, const AirProperties& air,
                             double length);

// Flat-plate forced convection; laminar below the branch threshold, turbulent
// at or above it.
inline constexpr double kForcedConvectionBranchSpeed = 3.3037;  // m/s
double forced_convection_coeff(double wind_speed, const AirProperties& air, double length);

HeatBalanceTerms heat_balance_terms(double cell_temp, double irradiance, double ambient_temp,
                                    double wind_speed, const PvArraySpec& spec,
                                    const AirProperties& air);

double heat_balance_residual(double cell_temp, double irradiance, double ambient_temp,
                             double wind_speed, const PvArraySpec& spec,
                             const AirProperties& air);

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bracketed bisection on the heat-balance residual. Initial bracket is
// [T_a - 20, T_a + 120]; if the residual does not change sign the bracket is
// doubled up to five times before giving up. The returned temperature
// satisfies |residual| <= 1e-6 * max(1 W, q_s).
double solve_cell_temperature(double irradiance, double ambient_temp, double wind_speed,
                              const PvArraySpec& spec, const AirProperties& air);

// Hourly fleet output of `count` identical modules, in watts. Dark hours
// short-circuit to zero without invoking the solver.
Vector array_solar_power(const YearDataset& ds, const PvArraySpec& spec,
                         const AirProperties& air, int count);

}  // namespace netload::solar
