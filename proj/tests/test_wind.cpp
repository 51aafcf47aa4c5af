#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "netload/rng.hpp"
#include "netload/wind.hpp"

using namespace netload;
using wind::TurbineSpec;

namespace {

TurbineSpec default_spec() {
  TurbineSpec s;  // D 5.6, eta 0.35, rho 1.225, 3/11/25 m/s
  s.validate();
  return s;
}

// brute-force branch classifier used as the oracle for curve membership
double piecewise_oracle(double v, const TurbineSpec& s) {
  const double area = std::numbers::pi / 4.0 * s.blade_diameter * s.blade_diameter;
  const double rated = 0.5 * s.air_density * area * s.rated * s.rated * s.rated * s.efficiency;
  if (v < s.cut_in) return 0.0;
  if (v > s.cut_out) return 0.0;
  if (v >= s.rated) return rated;
  return 0.5 * s.air_density * area * v * v * v * s.efficiency;
}

}  // namespace

TEST_CASE("swept area follows the quarter-circle law") {
  CHECK(wind::swept_area(2.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(wind::swept_area(1.0) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
  // reference value computed with 40-digit arithmetic
  CHECK(wind::swept_area(5.6) == doctest::Approx(24.630086404143979).epsilon(1e-12));
  CHECK_THROWS_AS(wind::swept_area(0.0), std::invalid_argument);
  CHECK_THROWS_AS(wind::swept_area(-1.0), std::invalid_argument);
}

TEST_CASE("power curve branches") {
  const TurbineSpec s = default_spec();
  CHECK(wind::turbine_power(s.cut_in / 2.0, s) == 0.0);
  CHECK(wind::turbine_power((s.rated + s.cut_out) / 2.0, s) == s.rated_power());
  CHECK(wind::turbine_power(s.cut_out + 0.5, s) == 0.0);
  CHECK_THROWS_AS(wind::turbine_power(std::nan(""), s), std::invalid_argument);
}

TEST_CASE("cubic branch matches direct evaluation") {
  TurbineSpec s;
  s.air_density = 1.2;
  s.blade_diameter = 4.0;  // area = 4*pi
  s.efficiency = 0.35;
  s.cut_in = 3.0;
  s.rated = 11.0;
  s.cut_out = 25.0;
  // 0.5 * 1.2 * 4pi * 6^3 * 0.35, evaluated independently
  CHECK(wind::turbine_power(6.0, s) == doctest::Approx(570.0105710673321).epsilon(1e-12));
}

TEST_CASE("rated power derives from the cubic law at rated speed") {
  const TurbineSpec s = default_spec();
  const double direct = 0.5 * s.air_density * wind::swept_area(s.blade_diameter) *
                        std::pow(s.rated, 3) * s.efficiency;
  CHECK(s.rated_power() == doctest::Approx(direct).epsilon(1e-15));

  const TurbineSpec back = TurbineSpec::from_rated_power(5000.0, 5.6, 1.225, 3.0, 11.0, 25.0);
  CHECK(back.rated_power() == doctest::Approx(5000.0).epsilon(1e-12));
  CHECK(back.efficiency > 0.0);
  CHECK(back.efficiency <= 1.0);
}

TEST_CASE("curve is continuous at rated speed and bounded by rated power") {
  const TurbineSpec s = default_spec();
  const double eps = 1e-9;
  const double left = wind::turbine_power(s.rated - eps, s);
  const double right = wind::turbine_power(s.rated + eps, s);
  CHECK(std::abs(left - right) <= 1e-6 * s.rated_power());

  Rng rng(123);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.uniform(0.0, 30.0);
    const double p = wind::turbine_power(v, s);
    CHECK(p >= 0.0);
    CHECK(p <= s.rated_power() * (1.0 + 1e-12));
  }
}

TEST_CASE("curve is monotone non-decreasing between cut-in and cut-out") {
  const TurbineSpec s = default_spec();
  double prev = wind::turbine_power(s.cut_in, s);
  for (double v = s.cut_in; v <= s.cut_out; v += 0.01) {
    const double p = wind::turbine_power(v, s);
    CHECK(p >= prev - 1e-12);
    prev = p;
  }
}

TEST_CASE("discontinuities only at cut-in and cut-out") {
  const TurbineSpec s = default_spec();
  const double eps = 1e-9;
  // jump up at cut-in
  CHECK(wind::turbine_power(s.cut_in - eps, s) == 0.0);
  CHECK(wind::turbine_power(s.cut_in, s) > 0.0);
  // jump to zero past cut-out
  CHECK(wind::turbine_power(s.cut_out, s) == s.rated_power());
  CHECK(wind::turbine_power(s.cut_out + eps, s) == 0.0);
}

TEST_CASE("branch membership agrees with the brute-force classifier") {
  const TurbineSpec s = default_spec();
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.uniform(0.0, 35.0);
    const double expected = piecewise_oracle(v, s);
    CHECK(wind::turbine_power(v, s) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("fleet output scales linearly with turbine count") {
  const TurbineSpec s = default_spec();

  Vector calm(4);
  calm << 0.0, 1.0, 2.0, 2.9;
  CHECK(wind::fleet_wind_power(calm, s, 3).isZero());

  Vector rated(1);
  rated << s.rated;
  CHECK(wind::fleet_wind_power(rated, s, 3)(0) ==
        doctest::Approx(3.0 * s.rated_power()).epsilon(1e-15));

  Rng rng(7);
  Vector speeds(256);
  for (Eigen::Index i = 0; i < speeds.size(); ++i) speeds(i) = rng.uniform(0.0, 30.0);
  const Vector one = wind::fleet_wind_power(speeds, s, 1);
  const Vector five = wind::fleet_wind_power(speeds, s, 5);
  for (Eigen::Index i = 0; i < speeds.size(); ++i)
    CHECK(five(i) == doctest::Approx(5.0 * one(i)).epsilon(1e-15));

  CHECK_THROWS_AS(wind::fleet_wind_power(calm, s, 0), std::invalid_argument);
}

TEST_CASE("spec validation rejects inverted thresholds") {
  TurbineSpec s = default_spec();
  s.rated = s.cut_out + 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_spec();
  s.cut_in = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_spec();
  s.efficiency = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
