#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>

#include "netload/types.hpp"

namespace netload {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kFeatureCount = 5;  // day, hour, temp, wind, irradiance

// Half-open row range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

struct SplitIndices {
  IndexRange train;
  IndexRange validation;
  IndexRange test;
};

// Per-column mean and population standard deviation.
struct FeatureStats {
  Vector mean;
  Vector stddev;
};

// n x 5 feature matrix in column order (day, hour, temp_K, wind_mps,
// irradiance_Wm2). Demand is a label, never a feature.
Matrix feature_matrix(const YearDataset& ds);
Vector demand_vector(const YearDataset& ds);

// Contiguous chronological split; sizes floor(r*n) for train and validation,
// remainder to test.
SplitIndices split_dataset(std::size_t n, std::array<double, 3> ratios = {0.8, 0.1, 0.1});

FeatureStats compute_stats(const Matrix& m, IndexRange rows);

// z-score per column with the supplied stats; zero-stddev columns map to 0.
Matrix normalize(const Matrix& m, const FeatureStats& stats);
Matrix denormalize(const Matrix& m, const FeatureStats& stats);

// Windowed samples for sequence training. Sample i covers feature rows
// [i, i+W) and its label is labels[i + W + horizon - 1]; count is
// n - W - horizon + 1. Stored feature-major: sample i occupies columns
// [i*W, (i+1)*W) of x, one column per timestep.
struct WindowSet {
  Matrix x;          // F x (count*W)
  Vector y;          // count
  int window = 0;
  int horizon = 1;

  std::size_t count() const { return static_cast<std::size_t>(y.size()); }
  auto sample(std::size_t i) const { return x.middleCols(i * window, window); }
  // label row index in the source matrix
  std::size_t target_row(std::size_t i) const { return i + window + horizon - 1; }
};

WindowSet make_windows(const Matrix& features, const Vector& labels, int window, int horizon = 1);

}  // namespace netload
