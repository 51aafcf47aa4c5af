#include "netload/forecast.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "netload/nn/serialize.hpp"

namespace netload::forecast {

std::string to_string(Approach a) { return a == Approach::Direct ? "direct" : "indirect"; }

Approach approach_from_string(const std::string& s) {
  if (s == "direct") return Approach::Direct;
  if (s == "indirect") return Approach::Indirect;
  throw std::invalid_argument("unknown approach '" + s + "' (expected direct or indirect)");
}

DerivedSeries derive_series(const YearDataset& ds, const wind::TurbineSpec& turbine,
                            const solar::PvArraySpec& pv, const solar::AirProperties& air,
                            const PlantCounts& counts) {
  DerivedSeries out;
  const Matrix features = feature_matrix(ds);
  out.wind_total_w = wind::fleet_wind_power(features.col(3), turbine, counts.wind_turbines);
  out.solar_total_w = solar::array_solar_power(ds, pv, air, counts.pv_modules);
  out.demand_unit_kw = demand_vector(ds);
  out.net_load = compose_net_load(ds, out.wind_total_w, out.solar_total_w, counts);
  return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct PreparedInputs {
  SplitIndices split;
  FeatureStats feature_stats;
  Matrix features_norm;  // n x 5, z-scored with train statistics
};

PreparedInputs prepare_inputs(const YearDataset& ds) {
  PreparedInputs prep;
  const Matrix features = feature_matrix(ds);
  prep.split = split_dataset(ds.size());
  prep.feature_stats = compute_stats(features, prep.split.train);
  prep.features_norm = normalize(features, prep.feature_stats);
  return prep;
}

struct LabelStats {
  double mean = 0.0;
  double stddev = 1.0;
};

LabelStats label_stats(const Vector& labels, IndexRange train) {
  const auto seg = labels.segment(static_cast<Eigen::Index>(train.begin),
                                  static_cast<Eigen::Index>(train.size()));
  LabelStats s;
  s.mean = seg.mean();
  s.stddev = std::sqrt((seg.array() - s.mean).square().mean());
  return s;
}

Vector normalize_labels(const Vector& labels, const LabelStats& s) {
  if (s.stddev == 0.0) return Vector::Zero(labels.size());
  return (labels.array() - s.mean) / s.stddev;
}

WindowSet partition_windows(const Matrix& features_norm, const Vector& labels_norm,
                            IndexRange rows, int window, int horizon) {
  const Matrix f = features_norm.middleRows(static_cast<Eigen::Index>(rows.begin),
                                            static_cast<Eigen::Index>(rows.size()));
  const Vector l = labels_norm.segment(static_cast<Eigen::Index>(rows.begin),
                                       static_cast<Eigen::Index>(rows.size()));
  return make_windows(f, l, window, horizon);
}

struct TrainedModel {
  ModelSnapshot snapshot;
  SeriesEvaluation eval;
};

// Train one model end to end on the given label series and evaluate it on
// the test partition, in the label's native units.
TrainedModel train_one(const YearDataset& ds, const PreparedInputs& prep, const Vector& labels,
                       const std::string& label_name, const PipelineConfig& cfg,
                       std::uint64_t model_seed) {
  const LabelStats lstats = label_stats(labels, prep.split.train);
  const Vector labels_norm = normalize_labels(labels, lstats);

  const WindowSet train_set =
      partition_windows(prep.features_norm, labels_norm, prep.split.train, cfg.window, cfg.horizon);
  const WindowSet val_set = partition_windows(prep.features_norm, labels_norm,
                                              prep.split.validation, cfg.window, cfg.horizon);
  const WindowSet test_set =
      partition_windows(prep.features_norm, labels_norm, prep.split.test, cfg.window, cfg.horizon);

  nn::ModelConfig mc;
  mc.features = kFeatureCount;
  mc.lstm_hidden = cfg.lstm_hidden;
  mc.dense_hidden = cfg.dense_hidden;
  mc.dropout_rate = cfg.dropout_rate;
  mc.l2_lambda = cfg.l2_lambda;
  Rng init_rng(mix_seed(model_seed, 0));
  nn::LstmModel model = nn::make_model(mc, init_rng);

  nn::TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.seed = mix_seed(model_seed, 1);
  tc.early_stop_patience = cfg.early_stop_patience;
  tc.adam = cfg.adam;

  TrainedModel out;
  out.eval.loss_curve = nn::train_epochs(model, train_set, val_set, tc);

  const Vector pred_norm = nn::predict(model, test_set);
  out.eval.label_name = label_name;
  out.eval.predictions = (pred_norm.array() * lstats.stddev + lstats.mean).matrix();
  out.eval.actuals.resize(pred_norm.size());
  out.eval.timestamps.reserve(static_cast<std::size_t>(pred_norm.size()));
  for (Eigen::Index i = 0; i < pred_norm.size(); ++i) {
    const std::size_t global_row =
        prep.split.test.begin + test_set.target_row(static_cast<std::size_t>(i));
    out.eval.actuals(i) = labels(static_cast<Eigen::Index>(global_row));
    const WeatherRecord& r = ds[global_row];
    out.eval.timestamps.emplace_back(r.day, r.hour);
  }

  out.snapshot.model = std::move(model);
  out.snapshot.feature_stats = prep.feature_stats;
  out.snapshot.label_mean = lstats.mean;
  out.snapshot.label_stddev = lstats.stddev;
  out.snapshot.window = cfg.window;
  out.snapshot.horizon = cfg.horizon;
  out.snapshot.label_name = label_name;
  return out;
}

void finish_evaluation(SeriesEvaluation& eval, const PipelineConfig& cfg) {
  eval.metrics = metrics::compute_metrics(eval.predictions, eval.actuals);
  eval.ape_floor = metrics::ape_floor(eval.actuals);
  eval.histogram_bin_pct = cfg.histogram_bin_pct;
  if (cfg.histogram_subset > 0 && cfg.histogram_subset < eval.predictions.size()) {
    const Eigen::Index n = cfg.histogram_subset;
    eval.histogram = metrics::abs_error_histogram(eval.predictions.head(n), eval.actuals.head(n),
                                                  cfg.histogram_bin_pct);
  } else {
    eval.histogram =
        metrics::abs_error_histogram(eval.predictions, eval.actuals, cfg.histogram_bin_pct);
  }
  eval.tolerance_pct = cfg.tolerance_pct;
  eval.tolerance_fraction =
      metrics::tolerance_fraction(eval.predictions, eval.actuals, cfg.tolerance_pct);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NETLOAD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

PipelineResult run_direct(const YearDataset& ds, const wind::TurbineSpec& turbine,
                          const solar::PvArraySpec& pv, const solar::AirProperties& air,
                          const PlantCounts& counts, const PipelineConfig& cfg) {
  const DerivedSeries derived = derive_series(ds, turbine, pv, air, counts);
  const PreparedInputs prep = prepare_inputs(ds);

  TrainedModel trained = train_one(ds, prep, derived.net_load.values, "netload_kW", cfg,
                                   mix_seed(cfg.seed, 0));
  finish_evaluation(trained.eval, cfg);

  PipelineResult result;
  result.forecaster.approach = Approach::Direct;
  result.forecaster.snapshots.push_back(std::move(trained.snapshot));
  result.forecaster.counts = counts;
  result.report.approach = Approach::Direct;
  result.report.seed = cfg.seed;
  result.report.net_load = std::move(trained.eval);
  return result;
}

PipelineResult run_indirect(const YearDataset& ds, const wind::TurbineSpec& turbine,
                            const solar::PvArraySpec& pv, const solar::AirProperties& air,
                            const PlantCounts& counts, const PipelineConfig& cfg) {
  const DerivedSeries derived = derive_series(ds, turbine, pv, air, counts);
  const PreparedInputs prep = prepare_inputs(ds);

  struct Task {
    const Vector* labels;
    std::string name;
    std::uint64_t seed;
    TrainedModel result;
  };
  std::vector<Task> tasks;
  tasks.push_back({&derived.demand_unit_kw, "demand_unit_kW", mix_seed(cfg.seed, 1), {}});
  tasks.push_back({&derived.wind_total_w, "wind_W", mix_seed(cfg.seed, 2), {}});
  tasks.push_back({&derived.solar_total_w, "solar_W", mix_seed(cfg.seed, 3), {}});

  // the three trainings are independent; run them on a small worker pool
  const int threads = std::min<int>(resolve_threads(cfg.max_threads), static_cast<int>(tasks.size()));
  if (threads <= 1) {
    for (Task& t : tasks) t.result = train_one(ds, prep, *t.labels, t.name, cfg, t.seed);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          tasks[i].result = train_one(ds, prep, *tasks[i].labels, tasks[i].name, cfg,
                                      tasks[i].seed);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  PipelineResult result;
  result.forecaster.approach = Approach::Indirect;
  result.forecaster.counts = counts;
  result.report.approach = Approach::Indirect;
  result.report.seed = cfg.seed;

  // compose the net-load prediction from the three sub-model predictions
  SeriesEvaluation net;
  net.label_name = "netload_kW";
  net.predictions = compose_net_load(tasks[0].result.eval.predictions,
                                     tasks[1].result.eval.predictions,
                                     tasks[2].result.eval.predictions, counts);
  net.actuals = compose_net_load(tasks[0].result.eval.actuals, tasks[1].result.eval.actuals,
                                 tasks[2].result.eval.actuals, counts);
  net.timestamps = tasks[0].result.eval.timestamps;
  finish_evaluation(net, cfg);
  result.report.net_load = std::move(net);

  for (Task& t : tasks) {
    finish_evaluation(t.result.eval, cfg);
    result.report.submodels.push_back(std::move(t.result.eval));
    result.forecaster.snapshots.push_back(std::move(t.result.snapshot));
  }
  return result;
}

ComparisonTable compare_approaches(const ForecastReport& direct, const ForecastReport& indirect) {
  if (direct.net_load.timestamps != indirect.net_load.timestamps)
    throw std::invalid_argument("compare_approaches: reports cover different test partitions");

  auto row = [](const std::string& name, double d, double i) {
    ComparisonRow r;
    r.metric = name;
    r.direct = d;
    r.indirect = i;
    r.better = d < i ? "direct" : (i < d ? "indirect" : "tie");
    return r;
  };
  ComparisonTable table;
  table.rows.push_back(row("MAE", direct.net_load.metrics.mae, indirect.net_load.metrics.mae));
  table.rows.push_back(row("MSE", direct.net_load.metrics.mse, indirect.net_load.metrics.mse));
  table.rows.push_back(row("RMSE", direct.net_load.metrics.rmse, indirect.net_load.metrics.rmse));
  if (direct.net_load.metrics.nrmse && indirect.net_load.metrics.nrmse)
    table.rows.push_back(
        row("nRMSE", *direct.net_load.metrics.nrmse, *indirect.net_load.metrics.nrmse));
  table.tolerance_pct = direct.net_load.tolerance_pct;
  table.direct_tolerance_fraction = direct.net_load.tolerance_fraction;
  table.indirect_tolerance_fraction = indirect.net_load.tolerance_fraction;
  return table;
}

namespace {

constexpr std::uint32_t kForecasterMagic = 0x53464c4e;  // "NLFS"
constexpr std::uint32_t kForecasterVersion = 1;

void write_snapshot(std::ostream& out, const ModelSnapshot& snap) {
  nn::write_model(out, snap.model);
  nn::write_vector(out, snap.feature_stats.mean);
  nn::write_vector(out, snap.feature_stats.stddev);
  nn::write_f64(out, snap.label_mean);
  nn::write_f64(out, snap.label_stddev);
  nn::write_i64(out, snap.window);
  nn::write_i64(out, snap.horizon);
  nn::write_string(out, snap.label_name);
}

ModelSnapshot read_snapshot(std::istream& in) {
  ModelSnapshot snap;
  snap.model = nn::read_model(in);
  snap.feature_stats.mean = nn::read_vector(in);
  snap.feature_stats.stddev = nn::read_vector(in);
  snap.label_mean = nn::read_f64(in);
  snap.label_stddev = nn::read_f64(in);
  snap.window = static_cast<int>(nn::read_i64(in));
  snap.horizon = static_cast<int>(nn::read_i64(in));
  snap.label_name = nn::read_string(in);
  return snap;
}

}  // namespace

void save_forecaster(const std::string& path, const SavedForecaster& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw nn::SerializeError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(&kForecasterMagic), 4);
  out.write(reinterpret_cast<const char*>(&kForecasterVersion), 4);
  const std::uint8_t kind = f.approach == Approach::Direct ? 0 : 1;
  out.write(reinterpret_cast<const char*>(&kind), 1);
  nn::write_i64(out, static_cast<std::int64_t>(f.snapshots.size()));
  for (const auto& s : f.snapshots) write_snapshot(out, s);
  nn::write_i64(out, f.counts.residential_units);
  nn::write_i64(out, f.counts.pv_modules);
  nn::write_i64(out, f.counts.wind_turbines);
  if (!out) throw nn::SerializeError("write failed for '" + path + "'");
}

SavedForecaster load_forecaster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nn::SerializeError("cannot open '" + path + "'");
  std::uint32_t magic = 0, version = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  if (!in || magic != kForecasterMagic) throw nn::SerializeError("not a forecaster file");
  if (version != kForecasterVersion)
    throw nn::SerializeError("unsupported forecaster version " + std::to_string(version));
  std::uint8_t kind = 0;
  in.read(reinterpret_cast<char*>(&kind), 1);
  SavedForecaster f;
  f.approach = kind == 0 ? Approach::Direct : Approach::Indirect;
  const std::int64_t count = nn::read_i64(in);
  if (count < 1 || count > 8) throw nn::SerializeError("bad snapshot count");
  for (std::int64_t i = 0; i < count; ++i) f.snapshots.push_back(read_snapshot(in));
  f.counts.residential_units = static_cast<int>(nn::read_i64(in));
  f.counts.pv_modules = static_cast<int>(nn::read_i64(in));
  f.counts.wind_turbines = static_cast<int>(nn::read_i64(in));
  return f;
}

PredictionSeries predict_series(const SavedForecaster& f, const YearDataset& ds) {
  if (f.snapshots.empty()) throw std::invalid_argument("empty forecaster");
  const Matrix features = feature_matrix(ds);

  PredictionSeries out;
  Matrix per_model(0, 0);
  for (std::size_t k = 0; k < f.snapshots.size(); ++k) {
    const ModelSnapshot& snap = f.snapshots[k];
    const Matrix fnorm = normalize(features, snap.feature_stats);
    const Vector dummy = Vector::Zero(features.rows());
    const WindowSet windows = make_windows(fnorm, dummy, snap.window, snap.horizon);
    const Vector pred_norm = nn::predict(snap.model, windows);
    const Vector pred =
        (pred_norm.array() * snap.label_stddev + snap.label_mean).matrix();
    if (per_model.rows() == 0) {
      per_model.resize(pred.size(), static_cast<Eigen::Index>(f.snapshots.size()));
      out.timestamps.reserve(static_cast<std::size_t>(pred.size()));
      for (Eigen::Index i = 0; i < pred.size(); ++i) {
        const WeatherRecord& r = ds[windows.target_row(static_cast<std::size_t>(i))];
        out.timestamps.emplace_back(r.day, r.hour);
      }
    }
    per_model.col(static_cast<Eigen::Index>(k)) = pred;
    out.columns.push_back(snap.label_name);
  }

  if (f.approach == Approach::Indirect) {
    if (f.snapshots.size() != 3)
      throw std::invalid_argument("indirect forecaster must hold three models");
    const Vector net = compose_net_load(per_model.col(0), per_model.col(1), per_model.col(2),
                                        f.counts);
    per_model.conservativeResize(Eigen::NoChange, per_model.cols() + 1);
    per_model.col(per_model.cols() - 1) = net;
    out.columns.push_back("netload_kW");
  }
  out.values = std::move(per_model);
  return out;
}

}  // namespace netload::forecast
