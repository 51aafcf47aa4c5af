#pragma once

#include <string>

#include "netload/forecast.hpp"
#include "netload/synth.hpp"

namespace netload {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Whole-run manifest. Every field has a default; a JSON config file overrides
// defaults and command-line flags override the file.
struct RunConfig {
  std::string input_csv;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool allow_leap = false;

  PlantCounts counts;
  wind::TurbineSpec turbine;
  solar::PvArraySpec pv;
  solar::AirProperties air;
  SynthParams synth;
  forecast::PipelineConfig pipeline;

  double histogram_bin_pct = 10.0;
  double tolerance_pct = 20.0;
  int histogram_subset = 0;  // >0: histogram only the first N test samples

  void validate() const;
};

// Parse from JSON text; unknown keys and malformed values raise ConfigError
// naming the offending key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

}  // namespace netload
