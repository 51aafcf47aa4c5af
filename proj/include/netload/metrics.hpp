#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "netload/dataset.hpp"

namespace netload::metrics {

struct MetricsReport {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  std::optional<double> nrmse;  // absent when the actual series is constant
  double nrmse_normalizer = 0.0;  // max(actual) - min(actual), always recorded
};

struct HistogramBin {
  double lo_pct = 0.0;
  double hi_pct = 0.0;  // +inf on the overflow bin
  long count = 0;
};

// nRMSE normalizes by the range of the actual series.
MetricsReport compute_metrics(const Vector& pred, const Vector& actual);

// Absolute percentage error of one sample. The denominator is
// max(|actual_i|, floor) where floor defaults to 1% of the actual range,
// which keeps zero crossings from blowing the histogram up.
double ape_floor(const Vector& actual);
double abs_pct_error(double pred, double actual, double floor);

std::vector<HistogramBin> abs_error_histogram(const Vector& pred, const Vector& actual,
                                              double bin_width_pct = 10.0,
                                              double max_pct = 100.0);

// Fraction of samples with absolute percentage error <= tol_pct.
double tolerance_fraction(const Vector& pred, const Vector& actual, double tol_pct = 20.0);

}  // namespace netload::metrics
