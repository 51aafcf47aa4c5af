#pragma once

#include <string>

#include "netload/forecast.hpp"

namespace netload::report {

// Deterministic JSON emission (ordered keys, shortest round-trip floats), so
// same-seed runs produce byte-identical documents.
std::string report_json(const forecast::ForecastReport& rep);
std::string comparison_json(const forecast::ComparisonTable& table, std::uint64_t seed);

// CSV side files.
std::string loss_curve_csv(const std::vector<nn::TrainRecord>& records);
std::string histogram_csv(const std::vector<metrics::HistogramBin>& bins);
std::string predictions_csv(const forecast::SeriesEvaluation& eval);
std::string net_load_csv(const NetLoadSeries& series);
std::string hourly_series_csv(const YearDataset& ds, const Vector& values,
                              const std::string& column_name);

}  // namespace netload::report
