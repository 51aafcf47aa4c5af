#pragma once

#include <cstdint>

#include "netload/types.hpp"

namespace netload {

// Knobs for the synthetic-year generator. Defaults describe a mild-climate
// residential site with usable wind.
struct SynthParams {
  // irradiance: diurnal half-sine between sunrise and sunset, zero at night
  double irradiance_peak = 950.0;      // W/m^2 clear-sky summer noon
  double irradiance_seasonal = 0.25;   // relative amplitude of seasonal swing
  double day_length_mean = 12.0;       // hours
  double day_length_swing = 2.4;       // hours, +- around the mean
  double cloud_min = 0.72;             // multiplicative noise lower bound
  double cloud_max = 1.0;

  // ambient temperature
  double temp_base = 290.0;            // K annual mean
  double temp_seasonal = 8.0;          // K
  double temp_diurnal = 4.0;           // K
  double temp_noise = 0.8;             // K, gaussian

  // wind: AR(1), clipped at zero
  double wind_mean = 6.0;              // m/s
  double wind_persistence = 0.85;
  double wind_noise = 1.2;             // m/s innovation stddev

  // per-unit demand: double-peak daily shape, seasonal scaling
  double demand_mean = 1.5;            // kW annual average per unit
  double demand_seasonal = 0.18;
  double demand_noise = 0.15;          // relative, uniform
};

// Deterministic for a fixed seed; all WeatherRecord invariants hold by
// construction (hours 0-4 and 20-23 are always dark).
YearDataset generate_synthetic_year(std::uint64_t seed, const SynthParams& site = {});

}  // namespace netload
