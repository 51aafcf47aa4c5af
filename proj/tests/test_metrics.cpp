#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "netload/metrics.hpp"
#include "netload/rng.hpp"

using namespace netload;
using namespace netload::metrics;

TEST_CASE("perfect prediction zeroes every metric") {
  Vector actual(4);
  actual << 1.0, 2.0, 3.0, 4.0;
  const MetricsReport rep = compute_metrics(actual, actual);
  CHECK(rep.mae == 0.0);
  CHECK(rep.mse == 0.0);
  CHECK(rep.rmse == 0.0);
  REQUIRE(rep.nrmse.has_value());
  CHECK(*rep.nrmse == 0.0);
  CHECK(rep.nrmse_normalizer == doctest::Approx(3.0));
}

TEST_CASE("rmse is consistent with the published table") {
  // any vectors whose MSE equals the table entry must reproduce its RMSE
  auto rmse_for = [](double mse) {
    Vector actual(8), pred(8);
    const double e = std::sqrt(mse);
    for (int i = 0; i < 8; ++i) {
      actual(i) = i;  // non-constant so nRMSE exists
      pred(i) = actual(i) + e;
    }
    const MetricsReport rep = compute_metrics(pred, actual);
    CHECK(rep.mse == doctest::Approx(mse).epsilon(1e-12));
    return rep.rmse;
  };
  CHECK(std::abs(rmse_for(153.59356) - 12.39329) <= 1e-4);
  CHECK(std::abs(rmse_for(147.63212) - 12.15040) <= 1e-4);
}

TEST_CASE("hand-computed metrics with a constant actual") {
  Vector pred(2), actual(2);
  pred << 1.0, 3.0;
  actual << 0.0, 0.0;
  const MetricsReport rep = compute_metrics(pred, actual);
  CHECK(rep.mae == doctest::Approx(2.0));
  CHECK(rep.mse == doctest::Approx(5.0));
  CHECK(rep.rmse == doctest::Approx(std::sqrt(5.0)));
  CHECK_FALSE(rep.nrmse.has_value());  // constant actual, normalizer zero
  CHECK(rep.nrmse_normalizer == 0.0);
}

TEST_CASE("rmse squared equals mse across random inputs") {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    Vector pred(50), actual(50);
    for (Eigen::Index i = 0; i < 50; ++i) {
      pred(i) = rng.normal(0.0, 10.0);
      actual(i) = rng.normal(0.0, 10.0);
    }
    const MetricsReport rep = compute_metrics(pred, actual);
    CHECK(std::abs(rep.rmse * rep.rmse - rep.mse) <= 1e-9 * std::max(1.0, rep.mse));
    CHECK(rep.mae <= rep.rmse + 1e-12);  // Jensen
  }
}

TEST_CASE("metrics are invariant under identical permutation") {
  Rng rng(11);
  Vector pred(64), actual(64);
  for (Eigen::Index i = 0; i < 64; ++i) {
    pred(i) = rng.normal(5.0, 3.0);
    actual(i) = rng.normal(5.0, 3.0);
  }
  const MetricsReport a = compute_metrics(pred, actual);
  std::vector<Eigen::Index> perm(64);
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(perm, rng);
  Vector pred_p(64), actual_p(64);
  for (Eigen::Index i = 0; i < 64; ++i) {
    pred_p(i) = pred(perm[static_cast<std::size_t>(i)]);
    actual_p(i) = actual(perm[static_cast<std::size_t>(i)]);
  }
  const MetricsReport b = compute_metrics(pred_p, actual_p);
  CHECK(a.mae == doctest::Approx(b.mae).epsilon(1e-12));
  CHECK(a.mse == doctest::Approx(b.mse).epsilon(1e-12));
  CHECK(a.rmse == doctest::Approx(b.rmse).epsilon(1e-12));
}

TEST_CASE("histogram puts perfect predictions in the first bin") {
  Vector actual(5);
  actual << 10, 20, 30, 40, 50;
  const auto bins = abs_error_histogram(actual, actual);
  CHECK(bins.front().count == 5);
  long total = 0;
  for (const auto& b : bins) total += b.count;
  CHECK(total == 5);
}

TEST_CASE("uniform 15 percent errors land in the second decade bin") {
  Vector actual(6), pred(6);
  for (int i = 0; i < 6; ++i) {
    actual(i) = 100.0 + i;
    pred(i) = 1.15 * actual(i);
  }
  const auto bins = abs_error_histogram(pred, actual);
  CHECK(bins[1].lo_pct == doctest::Approx(10.0));
  CHECK(bins[1].hi_pct == doctest::Approx(20.0));
  CHECK(bins[1].count == 6);
}

TEST_CASE("histogram matches a brute-force re-binning oracle") {
  Rng rng(12);
  Vector pred(500), actual(500);
  for (Eigen::Index i = 0; i < 500; ++i) {
    actual(i) = rng.normal(50.0, 40.0);
    pred(i) = actual(i) * rng.uniform(0.0, 2.5);
  }
  const double width = 10.0;
  const auto bins = abs_error_histogram(pred, actual, width);

  const double floor = ape_floor(actual);
  std::vector<long> expected(bins.size(), 0);
  for (Eigen::Index i = 0; i < 500; ++i) {
    const double e = 100.0 * std::abs(pred(i) - actual(i)) / std::max(std::abs(actual(i)), floor);
    std::size_t b = e >= 100.0 ? bins.size() - 1 : static_cast<std::size_t>(e / width);
    expected[b] += 1;
  }
  long total = 0;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    CHECK(bins[b].count == expected[b]);
    total += bins[b].count;
  }
  CHECK(total == 500);
}

TEST_CASE("tolerance fraction counts within-threshold samples") {
  Vector actual(4), pred(4);
  actual << 100, 100, 100, 100;
  pred << 110, 90, 130, 70;  // 10%, 10%, 30%, 30%
  CHECK(tolerance_fraction(pred, actual, 20.0) == doctest::Approx(0.5));
  CHECK(tolerance_fraction(actual, actual, 20.0) == doctest::Approx(1.0));
}

TEST_CASE("tolerance fraction is monotone and consistent with the histogram") {
  Rng rng(13);
  Vector pred(300), actual(300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    actual(i) = rng.normal(80.0, 30.0);
    pred(i) = actual(i) * rng.uniform(0.3, 1.7);
  }
  double prev = 0.0;
  for (double tol = 5.0; tol <= 120.0; tol += 5.0) {
    const double f = tolerance_fraction(pred, actual, tol);
    CHECK(f >= prev);
    prev = f;
  }

  // when the tolerance sits on a bin edge the fraction equals the mass below
  const auto bins = abs_error_histogram(pred, actual, 10.0);
  long below = bins[0].count + bins[1].count;
  CHECK(tolerance_fraction(pred, actual, 20.0) ==
        doctest::Approx(static_cast<double>(below) / 300.0));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(compute_metrics(Vector::Zero(3), Vector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(compute_metrics(Vector(), Vector()), std::invalid_argument);
  CHECK_THROWS_AS(abs_error_histogram(Vector::Zero(3), Vector::Zero(3), 0.0),
                  std::invalid_argument);
}
