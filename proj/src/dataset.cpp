#include "netload/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace netload {

Matrix feature_matrix(const YearDataset& ds) {
  const auto n = static_cast<Eigen::Index>(ds.size());
  Matrix m(n, kFeatureCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WeatherRecord& r = ds[static_cast<std::size_t>(i)];
    m(i, 0) = static_cast<double>(r.day);
    m(i, 1) = static_cast<double>(r.hour);
    m(i, 2) = r.temp_ambient;
    m(i, 3) = r.wind_speed;
    m(i, 4) = r.irradiance_collector;
  }
  return m;
}

Vector demand_vector(const YearDataset& ds) {
  const auto n = static_cast<Eigen::Index>(ds.size());
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = ds[static_cast<std::size_t>(i)].demand_unit;
  return v;
}

SplitIndices split_dataset(std::size_t n, std::array<double, 3> ratios) {
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");
  if (n < 10) throw std::invalid_argument("need at least 10 rows to split, got " +
                                          std::to_string(n));
  const auto n_train = static_cast<std::size_t>(std::floor(ratios[0] * static_cast<double>(n)));
  // the post-train remainder is shared between validation and test so their
  // sizes never differ by more than one; any odd row lands in test
  const std::size_t rest = n - n_train;
  const auto n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(rest) * ratios[1] / (ratios[1] + ratios[2])));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n)
    throw std::invalid_argument("split leaves an empty partition");
  SplitIndices s;
  s.train = {0, n_train};
  s.validation = {n_train, n_train + n_val};
  s.test = {n_train + n_val, n};  // remainder rows land here
  return s;
}

FeatureStats compute_stats(const Matrix& m, IndexRange rows) {
  if (rows.size() == 0) throw std::invalid_argument("compute_stats: empty range");
  if (rows.end > static_cast<std::size_t>(m.rows()))
    throw std::invalid_argument("compute_stats: range exceeds matrix");
  const auto block = m.middleRows(static_cast<Eigen::Index>(rows.begin),
                                  static_cast<Eigen::Index>(rows.size()));
  FeatureStats stats;
  stats.mean = block.colwise().mean();
  const auto centered = block.rowwise() - stats.mean.transpose();
  stats.stddev =
      (centered.array().square().colwise().sum() / static_cast<double>(rows.size())).sqrt();
  return stats;
}

Matrix normalize(const Matrix& m, const FeatureStats& stats) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double sd = stats.stddev(c);
    if (sd == 0.0)
      out.col(c).setZero();
    else
      out.col(c) = (m.col(c).array() - stats.mean(c)) / sd;
  }
  return out;
}

Matrix denormalize(const Matrix& m, const FeatureStats& stats) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    out.col(c) = m.col(c).array() * stats.stddev(c) + stats.mean(c);
  return out;
}

WindowSet make_windows(const Matrix& features, const Vector& labels, int window, int horizon) {
  const auto n = features.rows();
  if (labels.size() != n) throw std::invalid_argument("make_windows: feature/label length mismatch");
  if (window < 1 || horizon < 1) throw std::invalid_argument("make_windows: window and horizon must be >= 1");
  const Eigen::Index count = n - window - horizon + 1;
  if (count <= 0)
    throw std::invalid_argument("make_windows: need more than window+horizon-1 rows, got " +
                                std::to_string(n));
  WindowSet ws;
  ws.window = window;
  ws.horizon = horizon;
  ws.x.resize(features.cols(), count * window);
  ws.y.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    ws.x.middleCols(i * window, window) = features.middleRows(i, window).transpose();
    ws.y(i) = labels(i + window + horizon - 1);
  }
  return ws;
}

}  // namespace netload
