#include "netload/report.hpp"

#include <json.hpp>

#include "netload/csv.hpp"

namespace netload::report {

namespace {

using json = nlohmann::ordered_json;

json metrics_block(const metrics::MetricsReport& m) {
  json j;
  j["mae"] = m.mae;
  j["mse"] = m.mse;
  j["rmse"] = m.rmse;
  if (m.nrmse)
    j["nrmse"] = *m.nrmse;
  else
    j["nrmse"] = nullptr;
  j["nrmse_normalizer"] = m.nrmse_normalizer;
  return j;
}

json histogram_block(const std::vector<metrics::HistogramBin>& bins) {
  json arr = json::array();
  for (const auto& b : bins) {
    json e;
    e["lo_pct"] = b.lo_pct;
    if (std::isfinite(b.hi_pct))
      e["hi_pct"] = b.hi_pct;
    else
      e["hi_pct"] = nullptr;  // overflow bin
    e["count"] = b.count;
    arr.push_back(std::move(e));
  }
  return arr;
}

json evaluation_block(const forecast::SeriesEvaluation& eval) {
  json j;
  j["label"] = eval.label_name;
  j["samples"] = eval.predictions.size();
  j["metrics"] = metrics_block(eval.metrics);
  j["tolerance_pct"] = eval.tolerance_pct;
  j["tolerance_fraction"] = eval.tolerance_fraction;
  j["ape_denominator_floor"] = eval.ape_floor;
  j["histogram_bin_pct"] = eval.histogram_bin_pct;
  j["histogram"] = histogram_block(eval.histogram);
  json curve = json::array();
  for (const auto& rec : eval.loss_curve) {
    json e;
    e["epoch"] = rec.epoch;
    e["train_loss"] = rec.train_loss;
    e["val_loss"] = rec.val_loss;
    curve.push_back(std::move(e));
  }
  j["loss_curve"] = std::move(curve);
  return j;
}

json reference_block() {
  auto one = [](const forecast::ReferenceMetrics& r) {
    json j;
    j["mae"] = r.mae;
    j["mse"] = r.mse;
    j["rmse"] = r.rmse;
    j["nrmse"] = r.nrmse;
    return j;
  };
  json j;
  j["note"] = "published 60-unit microgrid benchmark, for context only";
  j["direct"] = one(forecast::kReferenceDirect);
  j["indirect"] = one(forecast::kReferenceIndirect);
  return j;
}

}  // namespace

std::string report_json(const forecast::ForecastReport& rep) {
  json j;
  j["approach"] = forecast::to_string(rep.approach);
  j["seed"] = rep.seed;
  j["net_load"] = evaluation_block(rep.net_load);
  if (!rep.submodels.empty()) {
    json subs = json::array();
    for (const auto& s : rep.submodels) subs.push_back(evaluation_block(s));
    j["submodels"] = std::move(subs);
  }
  j["reference_baseline"] = reference_block();
  return j.dump(2) + "\n";
}

std::string comparison_json(const forecast::ComparisonTable& table, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  json rows = json::array();
  for (const auto& r : table.rows) {
    json e;
    e["metric"] = r.metric;
    e["direct"] = r.direct;
    e["indirect"] = r.indirect;
    e["better"] = r.better;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["tolerance_pct"] = table.tolerance_pct;
  j["tolerance_fraction"] = {{"direct", table.direct_tolerance_fraction},
                             {"indirect", table.indirect_tolerance_fraction}};
  j["reference_baseline"] = reference_block();
  return j.dump(2) + "\n";
}

std::string loss_curve_csv(const std::vector<nn::TrainRecord>& records) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (const auto& r : records) {
    out += std::to_string(r.epoch);
    out += ',';
    out += format_double(r.train_loss);
    out += ',';
    out += format_double(r.val_loss);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const std::vector<metrics::HistogramBin>& bins) {
  std::string out = "bin_low_pct,bin_high_pct,count\n";
  for (const auto& b : bins) {
    out += format_double(b.lo_pct);
    out += ',';
    out += std::isfinite(b.hi_pct) ? format_double(b.hi_pct) : "inf";
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

std::string predictions_csv(const forecast::SeriesEvaluation& eval) {
  std::string out = "day,hour,actual,predicted\n";
  for (Eigen::Index i = 0; i < eval.predictions.size(); ++i) {
    const auto& [day, hour] = eval.timestamps[static_cast<std::size_t>(i)];
    out += std::to_string(day);
    out += ',';
    out += std::to_string(hour);
    out += ',';
    out += format_double(eval.actuals(i));
    out += ',';
    out += format_double(eval.predictions(i));
    out += '\n';
  }
  return out;
}

std::string net_load_csv(const NetLoadSeries& series) {
  std::string out = "day,hour,netload_kW\n";
  for (Eigen::Index i = 0; i < series.values.size(); ++i) {
    const auto& [day, hour] = series.timestamps[static_cast<std::size_t>(i)];
    out += std::to_string(day);
    out += ',';
    out += std::to_string(hour);
    out += ',';
    out += format_double(series.values(i));
    out += '\n';
  }
  return out;
}

std::string hourly_series_csv(const YearDataset& ds, const Vector& values,
                              const std::string& column_name) {
  std::string out = "day,hour," + column_name + "\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const WeatherRecord& r = ds[static_cast<std::size_t>(i)];
    out += std::to_string(r.day);
    out += ',';
    out += std::to_string(r.hour);
    out += ',';
    out += format_double(values(i));
    out += '\n';
  }
  return out;
}

}  // namespace netload::report
