#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netload/compose.hpp"
#include "netload/dataset.hpp"
#include "netload/metrics.hpp"
#include "netload/nn/train.hpp"
#include "netload/solar.hpp"
#include "netload/wind.hpp"

namespace netload::forecast {

enum class Approach { Direct, Indirect };

std::string to_string(Approach a);
Approach approach_from_string(const std::string& s);

struct PipelineConfig {
  Approach approach = Approach::Direct;
  int window = 24;
  int horizon = 1;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int early_stop_patience = 10;
  std::vector<int> lstm_hidden = {64, 64, 64};
  int dense_hidden = 32;
  double dropout_rate = 0.4;
  double l2_lambda = 0.001;
  nn::AdamParams adam;
  int max_threads = 0;  // 0: decide from NETLOAD_THREADS / hardware
  double histogram_bin_pct = 10.0;
  double tolerance_pct = 20.0;
  int histogram_subset = 0;  // >0: histogram only the first N test samples
};

// Everything a saved model needs to reproduce its predictions: parameters,
// input/label normalization, and window shape.
struct ModelSnapshot {
  nn::LstmModel model;
  FeatureStats feature_stats;
  double label_mean = 0.0;
  double label_stddev = 1.0;
  int window = 24;
  int horizon = 1;
  std::string label_name;
};

// Saved pipeline artifact: one snapshot for the direct approach, three
// (demand, wind, solar) plus plant counts for the indirect one.
struct SavedForecaster {
  Approach approach = Approach::Direct;
  std::vector<ModelSnapshot> snapshots;
  PlantCounts counts;
};

void save_forecaster(const std::string& path, const SavedForecaster& f);
SavedForecaster load_forecaster(const std::string& path);

// Fleet generation series and the composed net-load label, all aligned to the
// source dataset. Shared by both pipelines and by `derive`.
struct DerivedSeries {
  Vector wind_total_w;
  Vector solar_total_w;
  Vector demand_unit_kw;
  NetLoadSeries net_load;
};

DerivedSeries derive_series(const YearDataset& ds, const wind::TurbineSpec& turbine,
                            const solar::PvArraySpec& pv, const solar::AirProperties& air,
                            const PlantCounts& counts);

// Per-model evaluation block of a report.
struct SeriesEvaluation {
  std::string label_name;
  metrics::MetricsReport metrics;
  double tolerance_pct = 20.0;
  double tolerance_fraction = 0.0;
  double histogram_bin_pct = 10.0;
  double ape_floor = 0.0;
  std::vector<metrics::HistogramBin> histogram;
  std::vector<nn::TrainRecord> loss_curve;
  Vector predictions;  // de-normalized, test partition
  Vector actuals;
  std::vector<std::pair<int, int>> timestamps;  // (day, hour) of each target
};

struct ForecastReport {
  Approach approach = Approach::Direct;
  std::uint64_t seed = 0;
  SeriesEvaluation net_load;                 // headline evaluation
  std::vector<SeriesEvaluation> submodels;   // indirect only: demand, wind, solar
};

struct PipelineResult {
  SavedForecaster forecaster;
  ForecastReport report;
};

PipelineResult run_direct(const YearDataset& ds, const wind::TurbineSpec& turbine,
                          const solar::PvArraySpec& pv, const solar::AirProperties& air,
                          const PlantCounts& counts, const PipelineConfig& cfg);

PipelineResult run_indirect(const YearDataset& ds, const wind::TurbineSpec& turbine,
                            const solar::PvArraySpec& pv, const solar::AirProperties& air,
                            const PlantCounts& counts, const PipelineConfig& cfg);

// Reference metrics of the published 60-unit microgrid benchmark, embedded
// for side-by-side context in comparison output. Never asserted against.
struct ReferenceMetrics {
  double mae, mse, rmse, nrmse;
};
inline constexpr ReferenceMetrics kReferenceDirect{9.48166, 153.59356, 12.39329, 0.09642};
inline constexpr ReferenceMetrics kReferenceIndirect{9.41341, 147.63212, 12.15040, 0.09453};

struct ComparisonRow {
  std::string metric;
  double direct = 0.0;
  double indirect = 0.0;
  std::string better;  // "direct" | "indirect" | "tie"
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  double tolerance_pct = 20.0;
  double direct_tolerance_fraction = 0.0;
  double indirect_tolerance_fraction = 0.0;
};

// Side-by-side MAE/MSE/RMSE/nRMSE plus tolerance fractions. Throws when the
// two reports cover different test partitions.
ComparisonTable compare_approaches(const ForecastReport& direct, const ForecastReport& indirect);

// Prediction of a saved forecaster on a fresh dataset: windows the features
// with the stored stats and de-normalizes the output. For indirect
// forecasters the last column is the composed net load.
struct PredictionSeries {
  std::vector<std::string> columns;              // label names, composed last
  Matrix values;                                 // rows align with timestamps
  std::vector<std::pair<int, int>> timestamps;   // (day, hour) of each target
};

PredictionSeries predict_series(const SavedForecaster& f, const YearDataset& ds);

}  // namespace netload::forecast
