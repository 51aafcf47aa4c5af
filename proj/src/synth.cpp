#include "netload/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "netload/rng.hpp"

namespace netload {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// double-peak residential profile (morning and evening), normalized to mean 1
std::array<double, 24> demand_shape() {
  std::array<double, 24> s{};
  double sum = 0.0;
  for (int h = 0; h < 24; ++h) {
    const double morning = 0.50 * std::exp(-0.5 * std::pow((h - 8.0) / 2.0, 2.0));
    const double evening = 0.90 * std::exp(-0.5 * std::pow((h - 19.0) / 2.2, 2.0));
    s[h] = 0.55 + morning + evening;
    sum += s[h];
  }
  for (double& v : s) v *= 24.0 / sum;
  return s;
}

}  // namespace

YearDataset generate_synthetic_year(std::uint64_t seed, const SynthParams& site) {
  Rng base(seed);
  Rng rng_irr = base.fork(1);
  Rng rng_temp = base.fork(2);
  Rng rng_wind = base.fork(3);
  Rng rng_demand = base.fork(4);

  const auto shape = demand_shape();
  YearDataset ds;
  ds.records.reserve(kHoursPerYear);

  double wind = site.wind_mean;
  for (int day = 1; day <= 365; ++day) {
    const double season = std::cos(kTwoPi * (day - 172) / 365.0);  // +1 midsummer
    const double day_length = site.day_length_mean + site.day_length_swing * season;
    const double sunrise = 12.0 - 0.5 * day_length;
    const double sunset = 12.0 + 0.5 * day_length;
    const double irr_amplitude = site.irradiance_peak * (1.0 + site.irradiance_seasonal * season);

    for (int hour = 0; hour < 24; ++hour) {
      WeatherRecord rec;
      rec.day = day;
      rec.hour = hour;

      double irr = 0.0;
      if (hour > sunrise && hour < sunset) {
        const double phase = (hour - sunrise) / (sunset - sunrise);
        irr = irr_amplitude * std::sin(std::numbers::pi * phase);
        irr *= rng_irr.uniform(site.cloud_min, site.cloud_max);
      }
      rec.irradiance_collector = std::max(0.0, irr);

      // day 200 is the warm-season peak, 15:00 the daily one
      rec.temp_ambient = site.temp_base +
                         site.temp_seasonal * std::cos(kTwoPi * (day - 200) / 365.0) -
                         site.temp_diurnal * std::cos(kTwoPi * (hour - 15) / 24.0) +
                         rng_temp.normal(0.0, site.temp_noise);

      wind = site.wind_mean + site.wind_persistence * (wind - site.wind_mean) +
             rng_wind.normal(0.0, site.wind_noise);
      wind = std::max(0.0, wind);
      rec.wind_speed = wind;

      const double season_demand = 1.0 + site.demand_seasonal * std::cos(kTwoPi * (day - 15) / 365.0);
      const double noise = rng_demand.uniform(1.0 - site.demand_noise, 1.0 + site.demand_noise);
      rec.demand_unit = std::max(0.0, site.demand_mean * shape[hour] * season_demand * noise);

      ds.records.push_back(rec);
    }
  }
  validate_year(ds, false);
  return ds;
}

}  // namespace netload
