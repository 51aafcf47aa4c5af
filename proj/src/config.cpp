#include "netload/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace netload {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::string& scope,
                    const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.contains(it.key()))
      throw ConfigError("unknown key '" + (scope.empty() ? it.key() : scope + "." + it.key()) +
                        "'");
}

template <typename T>
void get(const json& obj, const std::string& scope, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for key '" + (scope.empty() ? key : scope + "." + key) + "'");
  }
}

void parse_counts(const json& j, PlantCounts& c) {
  reject_unknown(j, "counts", {"residential_units", "pv_modules", "wind_turbines"});
  get(j, "counts", "residential_units", c.residential_units);
  get(j, "counts", "pv_modules", c.pv_modules);
  get(j, "counts", "wind_turbines", c.wind_turbines);
}

void parse_turbine(const json& j, wind::TurbineSpec& t) {
  reject_unknown(j, "turbine",
                 {"blade_diameter_m", "efficiency", "air_density_kgm3", "cut_in_mps", "rated_mps",
                  "cut_out_mps", "rated_power_W"});
  get(j, "turbine", "blade_diameter_m", t.blade_diameter);
  get(j, "turbine", "efficiency", t.efficiency);
  get(j, "turbine", "air_density_kgm3", t.air_density);
  get(j, "turbine", "cut_in_mps", t.cut_in);
  get(j, "turbine", "rated_mps", t.rated);
  get(j, "turbine", "cut_out_mps", t.cut_out);
  if (j.contains("rated_power_W")) {
    double rated_power = 0.0;
    get(j, "turbine", "rated_power_W", rated_power);
    t = wind::TurbineSpec::from_rated_power(rated_power, t.blade_diameter, t.air_density,
                                            t.cut_in, t.rated, t.cut_out);
  }
}

void parse_pv(const json& j, solar::PvArraySpec& p) {
  reject_unknown(j, "pv",
                 {"rated_power_W", "ref_irradiance_Wm2", "ref_cell_temp_K", "gamma_per_K",
                  "surface_area_m2", "absorptivity", "emissivity_cell", "emissivity_ambient",
                  "characteristic_length_m"});
  get(j, "pv", "rated_power_W", p.rated_power);
  get(j, "pv", "ref_irradiance_Wm2", p.ref_irradiance);
  get(j, "pv", "ref_cell_temp_K", p.ref_cell_temp);
  get(j, "pv", "gamma_per_K", p.gamma_ref);
  get(j, "pv", "surface_area_m2", p.surface_area);
  get(j, "pv", "absorptivity", p.absorptivity);
  get(j, "pv", "emissivity_cell", p.emissivity_cell);
  get(j, "pv", "emissivity_ambient", p.emissivity_ambient);
  get(j, "pv", "characteristic_length_m", p.characteristic_length);
}

void parse_air(const json& j, solar::AirProperties& a) {
  reject_unknown(j, "air",
                 {"conductivity_WmK", "density_kgm3", "expansion_per_K", "specific_heat_JkgK",
                  "dynamic_viscosity_Pas", "gravity_ms2"});
  get(j, "air", "conductivity_WmK", a.conductivity);
  get(j, "air", "density_kgm3", a.density);
  get(j, "air", "expansion_per_K", a.expansion_coeff);
  get(j, "air", "specific_heat_JkgK", a.specific_heat);
  get(j, "air", "dynamic_viscosity_Pas", a.dynamic_viscosity);
  get(j, "air", "gravity_ms2", a.gravity);
}

void parse_synth(const json& j, SynthParams& s) {
  reject_unknown(j, "synth",
                 {"irradiance_peak", "irradiance_seasonal", "day_length_mean", "day_length_swing",
                  "cloud_min", "cloud_max", "temp_base", "temp_seasonal", "temp_diurnal",
                  "temp_noise", "wind_mean", "wind_persistence", "wind_noise", "demand_mean",
                  "demand_seasonal", "demand_noise"});
  get(j, "synth", "irradiance_peak", s.irradiance_peak);
  get(j, "synth", "irradiance_seasonal", s.irradiance_seasonal);
  get(j, "synth", "day_length_mean", s.day_length_mean);
  get(j, "synth", "day_length_swing", s.day_length_swing);
  get(j, "synth", "cloud_min", s.cloud_min);
  get(j, "synth", "cloud_max", s.cloud_max);
  get(j, "synth", "temp_base", s.temp_base);
  get(j, "synth", "temp_seasonal", s.temp_seasonal);
  get(j, "synth", "temp_diurnal", s.temp_diurnal);
  get(j, "synth", "temp_noise", s.temp_noise);
  get(j, "synth", "wind_mean", s.wind_mean);
  get(j, "synth", "wind_persistence", s.wind_persistence);
  get(j, "synth", "wind_noise", s.wind_noise);
  get(j, "synth", "demand_mean", s.demand_mean);
  get(j, "synth", "demand_seasonal", s.demand_seasonal);
  get(j, "synth", "demand_noise", s.demand_noise);
}

void parse_pipeline(const json& j, forecast::PipelineConfig& p) {
  reject_unknown(j, "pipeline",
                 {"approach", "window", "horizon", "epochs", "batch_size", "early_stop_patience",
                  "lstm_hidden", "dense_hidden", "dropout_rate", "l2_lambda", "learning_rate",
                  "beta1", "beta2", "epsilon", "max_threads"});
  if (j.contains("approach")) {
    std::string s;
    get(j, "pipeline", "approach", s);
    try {
      p.approach = forecast::approach_from_string(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("pipeline.approach: ") + e.what());
    }
  }
  get(j, "pipeline", "window", p.window);
  get(j, "pipeline", "horizon", p.horizon);
  get(j, "pipeline", "epochs", p.epochs);
  get(j, "pipeline", "batch_size", p.batch_size);
  get(j, "pipeline", "early_stop_patience", p.early_stop_patience);
  get(j, "pipeline", "lstm_hidden", p.lstm_hidden);
  get(j, "pipeline", "dense_hidden", p.dense_hidden);
  get(j, "pipeline", "dropout_rate", p.dropout_rate);
  get(j, "pipeline", "l2_lambda", p.l2_lambda);
  get(j, "pipeline", "learning_rate", p.adam.learning_rate);
  get(j, "pipeline", "beta1", p.adam.beta1);
  get(j, "pipeline", "beta2", p.adam.beta2);
  get(j, "pipeline", "epsilon", p.adam.epsilon);
  get(j, "pipeline", "max_threads", p.max_threads);
}

void parse_metrics(const json& j, RunConfig& c) {
  reject_unknown(j, "metrics", {"histogram_bin_pct", "tolerance_pct", "histogram_subset"});
  get(j, "metrics", "histogram_bin_pct", c.histogram_bin_pct);
  get(j, "metrics", "tolerance_pct", c.tolerance_pct);
  get(j, "metrics", "histogram_subset", c.histogram_subset);
}

}  // namespace

void RunConfig::validate() const {
  counts.validate();
  turbine.validate();
  pv.validate();
  if (pipeline.window < 1) throw ConfigError("pipeline.window must be >= 1");
  if (pipeline.horizon < 1) throw ConfigError("pipeline.horizon must be >= 1");
  if (pipeline.epochs < 0) throw ConfigError("pipeline.epochs must be >= 0");
  if (pipeline.batch_size < 1) throw ConfigError("pipeline.batch_size must be >= 1");
  if (pipeline.lstm_hidden.size() != 3)
    throw ConfigError("pipeline.lstm_hidden must list exactly 3 layer widths");
  for (int h : pipeline.lstm_hidden)
    if (h < 1) throw ConfigError("pipeline.lstm_hidden entries must be >= 1");
  if (pipeline.dense_hidden < 1) throw ConfigError("pipeline.dense_hidden must be >= 1");
  if (pipeline.dropout_rate < 0.0 || pipeline.dropout_rate >= 1.0)
    throw ConfigError("pipeline.dropout_rate must be in [0,1)");
  if (pipeline.l2_lambda < 0.0) throw ConfigError("pipeline.l2_lambda must be >= 0");
  if (histogram_bin_pct <= 0.0) throw ConfigError("metrics.histogram_bin_pct must be > 0");
  if (tolerance_pct <= 0.0) throw ConfigError("metrics.tolerance_pct must be > 0");
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root, "",
                 {"input_csv", "out_dir", "seed", "allow_leap", "counts", "turbine", "pv", "air",
                  "synth", "pipeline", "metrics"});
  RunConfig cfg;
  get(root, "", "input_csv", cfg.input_csv);
  get(root, "", "out_dir", cfg.out_dir);
  get(root, "", "seed", cfg.seed);
  get(root, "", "allow_leap", cfg.allow_leap);
  if (root.contains("counts")) parse_counts(root.at("counts"), cfg.counts);
  if (root.contains("turbine")) {
    try {
      parse_turbine(root.at("turbine"), cfg.turbine);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("turbine: ") + e.what());
    }
  }
  if (root.contains("pv")) parse_pv(root.at("pv"), cfg.pv);
  if (root.contains("air")) parse_air(root.at("air"), cfg.air);
  if (root.contains("synth")) parse_synth(root.at("synth"), cfg.synth);
  if (root.contains("pipeline")) parse_pipeline(root.at("pipeline"), cfg.pipeline);
  if (root.contains("metrics")) parse_metrics(root.at("metrics"), cfg);
  cfg.pipeline.seed = cfg.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["input_csv"] = cfg.input_csv;
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  j["allow_leap"] = cfg.allow_leap;
  j["counts"] = {{"residential_units", cfg.counts.residential_units},
                 {"pv_modules", cfg.counts.pv_modules},
                 {"wind_turbines", cfg.counts.wind_turbines}};
  j["turbine"] = {{"blade_diameter_m", cfg.turbine.blade_diameter},
                  {"efficiency", cfg.turbine.efficiency},
                  {"air_density_kgm3", cfg.turbine.air_density},
                  {"cut_in_mps", cfg.turbine.cut_in},
                  {"rated_mps", cfg.turbine.rated},
                  {"cut_out_mps", cfg.turbine.cut_out}};
  j["pv"] = {{"rated_power_W", cfg.pv.rated_power},
             {"ref_irradiance_Wm2", cfg.pv.ref_irradiance},
             {"ref_cell_temp_K", cfg.pv.ref_cell_temp},
             {"gamma_per_K", cfg.pv.gamma_ref},
             {"surface_area_m2", cfg.pv.surface_area},
             {"absorptivity", cfg.pv.absorptivity},
             {"emissivity_cell", cfg.pv.emissivity_cell},
             {"emissivity_ambient", cfg.pv.emissivity_ambient},
             {"characteristic_length_m", cfg.pv.characteristic_length}};
  j["air"] = {{"conductivity_WmK", cfg.air.conductivity},
              {"density_kgm3", cfg.air.density},
              {"expansion_per_K", cfg.air.expansion_coeff},
              {"specific_heat_JkgK", cfg.air.specific_heat},
              {"dynamic_viscosity_Pas", cfg.air.dynamic_viscosity},
              {"gravity_ms2", cfg.air.gravity}};
  j["pipeline"] = {{"approach", forecast::to_string(cfg.pipeline.approach)},
                   {"window", cfg.pipeline.window},
                   {"horizon", cfg.pipeline.horizon},
                   {"epochs", cfg.pipeline.epochs},
                   {"batch_size", cfg.pipeline.batch_size},
                   {"early_stop_patience", cfg.pipeline.early_stop_patience},
                   {"lstm_hidden", cfg.pipeline.lstm_hidden},
                   {"dense_hidden", cfg.pipeline.dense_hidden},
                   {"dropout_rate", cfg.pipeline.dropout_rate},
                   {"l2_lambda", cfg.pipeline.l2_lambda},
                   {"learning_rate", cfg.pipeline.adam.learning_rate},
                   {"beta1", cfg.pipeline.adam.beta1},
                   {"beta2", cfg.pipeline.adam.beta2},
                   {"epsilon", cfg.pipeline.adam.epsilon},
                   {"max_threads", cfg.pipeline.max_threads}};
  j["metrics"] = {{"histogram_bin_pct", cfg.histogram_bin_pct},
                  {"tolerance_pct", cfg.tolerance_pct},
                  {"histogram_subset", cfg.histogram_subset}};
  return j.dump(2) + "\n";
}

}  // namespace netload
