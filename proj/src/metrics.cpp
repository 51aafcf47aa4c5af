#include "netload/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace netload::metrics {

MetricsReport compute_metrics(const Vector& pred, const Vector& actual) {
  if (pred.size() != actual.size()) throw std::invalid_argument("metric vectors differ in length");
  if (pred.size() == 0) throw std::invalid_argument("metric vectors are empty");
  const Vector err = pred - actual;
  MetricsReport rep;
  rep.mae = err.array().abs().mean();
  rep.mse = err.array().square().mean();
  rep.rmse = std::sqrt(rep.mse);
  rep.nrmse_normalizer = actual.maxCoeff() - actual.minCoeff();
  if (rep.nrmse_normalizer > 0.0) rep.nrmse = rep.rmse / rep.nrmse_normalizer;
  return rep;
}

double ape_floor(const Vector& actual) {
  const double range = actual.maxCoeff() - actual.minCoeff();
  if (range > 0.0) return 0.01 * range;
  // degenerate constant series: fall back on its magnitude
  return std::max(1e-12, 0.01 * std::abs(actual(0)));
}

double abs_pct_error(double pred, double actual, double floor) {
  const double denom = std::max(std::abs(actual), floor);
  if (denom == 0.0)
    return pred == actual ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * std::abs(pred - actual) / denom;
}

std::vector<HistogramBin> abs_error_histogram(const Vector& pred, const Vector& actual,
                                              double bin_width_pct, double max_pct) {
  if (pred.size() != actual.size()) throw std::invalid_argument("metric vectors differ in length");
  if (bin_width_pct <= 0.0) throw std::invalid_argument("bin width must be > 0");
  const double floor = ape_floor(actual);
  const int regular = static_cast<int>(std::ceil(max_pct / bin_width_pct));
  std::vector<HistogramBin> bins(static_cast<std::size_t>(regular) + 1);
  for (int b = 0; b < regular; ++b) {
    bins[b].lo_pct = b * bin_width_pct;
    bins[b].hi_pct = std::min((b + 1) * bin_width_pct, max_pct);
  }
  bins.back().lo_pct = max_pct;  // overflow bin
  bins.back().hi_pct = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const double e = abs_pct_error(pred(i), actual(i), floor);
    int b = e >= max_pct ? regular : static_cast<int>(e / bin_width_pct);
    bins[static_cast<std::size_t>(b)].count += 1;
  }
  return bins;
}

double tolerance_fraction(const Vector& pred, const Vector& actual, double tol_pct) {
  if (pred.size() != actual.size()) throw std::invalid_argument("metric vectors differ in length");
  if (pred.size() == 0) return 0.0;
  const double floor = ape_floor(actual);
  Eigen::Index within = 0;
  for (Eigen::Index i = 0; i < pred.size(); ++i)
    if (abs_pct_error(pred(i), actual(i), floor) <= tol_pct) ++within;
  return static_cast<double>(within) / static_cast<double>(pred.size());
}

}  // namespace netload::metrics
