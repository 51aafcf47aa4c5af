// netload -- derive microgrid net load from weather data and forecast it.
//
// Subcommands: synth, derive, train, predict, compare. See README.md.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>

#include "netload/config.hpp"
#include "netload/csv.hpp"
#include "netload/report.hpp"

namespace fs = std::filesystem;
using namespace netload;

namespace {

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool force = false;
};

RunConfig effective_config(const GlobalFlags& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.pipeline.seed = *g.seed;
  }
  if (g.out_dir) cfg.out_dir = *g.out_dir;
  cfg.pipeline.histogram_bin_pct = cfg.histogram_bin_pct;
  cfg.pipeline.tolerance_pct = cfg.tolerance_pct;
  cfg.pipeline.histogram_subset = cfg.histogram_subset;
  return cfg;
}

// Refuses to clobber existing files unless --force was given.
void write_file(const fs::path& path, const std::string& content, bool force) {
  if (fs::exists(path) && !force)
    throw std::runtime_error("refusing to overwrite '" + path.string() +
                             "' (pass --force to allow)");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

YearDataset load_input(const RunConfig& cfg, const std::string& flag_input) {
  const std::string path = flag_input.empty() ? cfg.input_csv : flag_input;
  if (path.empty())
    throw std::runtime_error("no input CSV given (set input_csv in the config or pass --input)");
  return load_tmy_csv(path, cfg.allow_leap);
}

void emit_pipeline_outputs(const fs::path& dir, const forecast::PipelineResult& result,
                           bool force) {
  const std::string tag = forecast::to_string(result.report.approach);
  std::vector<fs::path> outputs = {dir / ("model_" + tag + ".bin"),
                                   dir / ("report_" + tag + ".json"),
                                   dir / ("predictions_" + tag + ".csv"),
                                   dir / ("histogram_" + tag + ".csv")};
  if (result.report.approach == forecast::Approach::Direct)
    outputs.push_back(dir / "loss_direct.csv");
  else
    for (const auto& sub : result.report.submodels)
      outputs.push_back(dir / ("loss_indirect_" + sub.label_name + ".csv"));

  // refuse before anything is written, so a failed run never clobbers files
  for (const auto& path : outputs)
    if (fs::exists(path) && !force)
      throw std::runtime_error("refusing to overwrite '" + path.string() +
                               "' (pass --force to allow)");
  fs::create_directories(dir);

  forecast::save_forecaster(outputs[0].string(), result.forecaster);
  write_file(dir / ("report_" + tag + ".json"), report::report_json(result.report), true);
  write_file(dir / ("predictions_" + tag + ".csv"),
             report::predictions_csv(result.report.net_load), true);
  write_file(dir / ("histogram_" + tag + ".csv"),
             report::histogram_csv(result.report.net_load.histogram), true);
  if (result.report.approach == forecast::Approach::Direct) {
    write_file(dir / "loss_direct.csv", report::loss_curve_csv(result.report.net_load.loss_curve),
               true);
  } else {
    for (const auto& sub : result.report.submodels)
      write_file(dir / ("loss_indirect_" + sub.label_name + ".csv"),
                 report::loss_curve_csv(sub.loss_curve), true);
  }
}

int cmd_synth(const GlobalFlags& g) {
  RunConfig cfg = effective_config(g);
  const YearDataset ds = generate_synthetic_year(cfg.seed, cfg.synth);
  write_file(fs::path(cfg.out_dir) / "synthetic_year.csv", serialize_tmy_csv(ds), g.force);
  std::cerr << "wrote " << (fs::path(cfg.out_dir) / "synthetic_year.csv").string() << " ("
            << ds.size() << " rows)\n";
  return 0;
}

int cmd_derive(const GlobalFlags& g, const std::string& input) {
  RunConfig cfg = effective_config(g);
  const YearDataset ds = load_input(cfg, input);
  const forecast::DerivedSeries derived =
      forecast::derive_series(ds, cfg.turbine, cfg.pv, cfg.air, cfg.counts);
  const fs::path dir(cfg.out_dir);
  write_file(dir / "wind_power.csv", report::hourly_series_csv(ds, derived.wind_total_w, "wind_W"),
             g.force);
  write_file(dir / "solar_power.csv",
             report::hourly_series_csv(ds, derived.solar_total_w, "solar_W"), g.force);
  write_file(dir / "net_load.csv", report::net_load_csv(derived.net_load), g.force);
  std::cerr << "wrote wind_power.csv, solar_power.csv, net_load.csv under " << dir.string()
            << "\n";
  return 0;
}

forecast::PipelineResult run_approach(const RunConfig& cfg, const YearDataset& ds,
                                      forecast::Approach approach) {
  forecast::PipelineConfig pc = cfg.pipeline;
  pc.approach = approach;
  return approach == forecast::Approach::Direct
             ? forecast::run_direct(ds, cfg.turbine, cfg.pv, cfg.air, cfg.counts, pc)
             : forecast::run_indirect(ds, cfg.turbine, cfg.pv, cfg.air, cfg.counts, pc);
}

int cmd_train(const GlobalFlags& g, const std::string& input, const std::string& approach_flag,
              std::optional<int> epochs_flag) {
  RunConfig cfg = effective_config(g);
  if (!approach_flag.empty())
    cfg.pipeline.approach = forecast::approach_from_string(approach_flag);
  if (epochs_flag) cfg.pipeline.epochs = *epochs_flag;
  const YearDataset ds = load_input(cfg, input);
  const auto result = run_approach(cfg, ds, cfg.pipeline.approach);
  const fs::path dir(cfg.out_dir);
  emit_pipeline_outputs(dir, result, g.force);
  std::cerr << "trained " << forecast::to_string(cfg.pipeline.approach) << " model; outputs under "
            << dir.string() << "\n";
  return 0;
}

int cmd_predict(const GlobalFlags& g, const std::string& model_path, const std::string& input) {
  RunConfig cfg = effective_config(g);
  if (model_path.empty()) throw std::runtime_error("--model is required");
  const forecast::SavedForecaster f = forecast::load_forecaster(model_path);
  const YearDataset ds = load_input(cfg, input);
  const forecast::PredictionSeries series = forecast::predict_series(f, ds);

  std::string csv = "day,hour";
  for (const auto& c : series.columns) csv += "," + c + "_pred";
  csv += '\n';
  for (Eigen::Index i = 0; i < series.values.rows(); ++i) {
    const auto& [day, hour] = series.timestamps[static_cast<std::size_t>(i)];
    csv += std::to_string(day) + ',' + std::to_string(hour);
    for (Eigen::Index c = 0; c < series.values.cols(); ++c)
      csv += ',' + format_double(series.values(i, c));
    csv += '\n';
  }
  write_file(fs::path(cfg.out_dir) / "predictions.csv", csv, g.force);
  std::cerr << "wrote " << (fs::path(cfg.out_dir) / "predictions.csv").string() << "\n";
  return 0;
}

int cmd_compare(const GlobalFlags& g, const std::string& input, std::optional<int> epochs_flag) {
  RunConfig cfg = effective_config(g);
  if (epochs_flag) cfg.pipeline.epochs = *epochs_flag;
  const YearDataset ds = load_input(cfg, input);
  const auto direct = run_approach(cfg, ds, forecast::Approach::Direct);
  const auto indirect = run_approach(cfg, ds, forecast::Approach::Indirect);
  const auto table = forecast::compare_approaches(direct.report, indirect.report);

  const fs::path dir(cfg.out_dir);
  emit_pipeline_outputs(dir, direct, g.force);
  emit_pipeline_outputs(dir, indirect, g.force);
  write_file(dir / "comparison.json", report::comparison_json(table, cfg.seed), g.force);

  std::cout << "metric        direct      indirect    better\n";
  for (const auto& row : table.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %11.5f %11.5f    %s\n", row.metric.c_str(),
                  row.direct, row.indirect, row.better.c_str());
    std::cout << line;
  }
  std::cout << "within " << table.tolerance_pct << "% tolerance: direct "
            << table.direct_tolerance_fraction << ", indirect "
            << table.indirect_tolerance_fraction << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microgrid net-load derivation and forecasting"};
  app.require_subcommand(1);
  app.fallthrough();  // let global flags appear after the subcommand

  GlobalFlags g;
  std::uint64_t seed_val = 0;
  std::string out_val;
  app.add_option("--config", g.config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed_val, "root random seed (overrides config)");
  auto* out_opt = app.add_option("--out", out_val, "output directory (overrides config)");
  app.add_flag("--force", g.force, "overwrite existing output files");

  std::string input, approach, model_path;
  int epochs = -1;

  auto* synth = app.add_subcommand("synth", "write a synthetic-year CSV");
  auto* derive = app.add_subcommand("derive", "derive wind/solar/net-load series from a CSV");
  derive->add_option("--input", input, "input CSV (overrides config input_csv)");
  auto* train = app.add_subcommand("train", "train a forecasting model");
  train->add_option("--input", input, "input CSV (overrides config input_csv)");
  train->add_option("--approach", approach, "direct|indirect (overrides config)");
  train->add_option("--epochs", epochs, "epoch budget (overrides config)");
  auto* predict = app.add_subcommand("predict", "predict with a saved model snapshot");
  predict->add_option("--model", model_path, "model snapshot path")->required();
  predict->add_option("--input", input, "input CSV (overrides config input_csv)");
  auto* compare = app.add_subcommand("compare", "run both approaches and compare them");
  compare->add_option("--input", input, "input CSV (overrides config input_csv)");
  compare->add_option("--epochs", epochs, "epoch budget (overrides config)");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) g.seed = seed_val;
  if (out_opt->count() > 0) g.out_dir = out_val;
  const std::optional<int> epochs_flag =
      epochs >= 0 ? std::optional<int>(epochs) : std::nullopt;

  try {
    if (synth->parsed()) return cmd_synth(g);
    if (derive->parsed()) return cmd_derive(g, input);
    if (train->parsed()) return cmd_train(g, input, approach, epochs_flag);
    if (predict->parsed()) return cmd_predict(g, model_path, input);
    if (compare->parsed()) return cmd_compare(g, input, epochs_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
