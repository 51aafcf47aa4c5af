#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "netload/csv.hpp"
#include "netload/dataset.hpp"
#include "netload/synth.hpp"

using namespace netload;

namespace {

// independent two-pass mean / population stddev used as an oracle
std::pair<double, double> two_pass_stats(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return {mean, std::sqrt(acc / static_cast<double>(xs.size()))};
}

std::string drop_row(const std::string& csv, int day, int hour) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  const std::string needle = std::to_string(day) + "," + std::to_string(hour) + ",";
  while (std::getline(in, line))
    if (line.rfind(needle, 0) != 0) out << line << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("csv round-trip is an identity on a synthetic year") {
  const YearDataset ds = generate_synthetic_year(7);
  REQUIRE(ds.size() == 8760);
  const std::string text = serialize_tmy_csv(ds);
  const YearDataset back = parse_tmy_csv(text);
  CHECK(back == ds);
  CHECK(serialize_tmy_csv(back) == text);
}

TEST_CASE("csv rejects out-of-range values naming the row") {
  std::string text = std::string(kCsvHeader) + "\n";
  text += "1,0,288,3,0,1\n";
  text += "1,1,-5,3,0,1\n";  // temp_K must be > 0
  try {
    parse_tmy_csv(text);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.row == 2);
    CHECK(std::string(e.what()).find("temp_K") != std::string::npos);
  }
}

TEST_CASE("csv rejects a malformed cell") {
  std::string text = std::string(kCsvHeader) + "\n1,0,288,abc,0,1\n";
  CHECK_THROWS_AS(parse_tmy_csv(text), CsvError);
  std::string short_row = std::string(kCsvHeader) + "\n1,0,288\n";
  CHECK_THROWS_AS(parse_tmy_csv(short_row), CsvError);
}

TEST_CASE("csv reports a chronological gap with the missing timestamp") {
  const YearDataset ds = generate_synthetic_year(3);
  const std::string text = drop_row(serialize_tmy_csv(ds), 10, 13);
  try {
    parse_tmy_csv(text);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    const std::string what = e.what();
    CHECK(what.find("day 10") != std::string::npos);
    CHECK(what.find("hour 13") != std::string::npos);
  }
}

TEST_CASE("csv rejects duplicated timestamps") {
  const YearDataset ds = generate_synthetic_year(3);
  std::string text = serialize_tmy_csv(ds);
  // duplicate the second data row right after itself
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    out << line << '\n';
    if (++n == 3) out << line << '\n';
  }
  CHECK_THROWS_AS(parse_tmy_csv(out.str()), CsvError);
}

TEST_CASE("split matches the published partition sizes") {
  const SplitIndices s = split_dataset(8760);
  CHECK(s.train == IndexRange{0, 7008});
  CHECK(s.validation == IndexRange{7008, 7884});
  CHECK(s.test == IndexRange{7884, 8760});
}

TEST_CASE("split handles small n and remainders") {
  const SplitIndices s10 = split_dataset(10);
  CHECK(s10.train == IndexRange{0, 8});
  CHECK(s10.validation == IndexRange{8, 9});
  CHECK(s10.test == IndexRange{9, 10});

  const SplitIndices s = split_dataset(8761);  // remainder goes to test
  CHECK(s.train.size() == 7008);
  CHECK(s.validation.size() == 876);
  CHECK(s.test.size() == 877);

  CHECK_THROWS_AS(split_dataset(9), std::invalid_argument);
}

TEST_CASE("split partitions are disjoint, contiguous, exhaustive") {
  for (std::size_t n : {10u, 11u, 17u, 100u, 8759u, 8760u, 8761u, 9999u}) {
    const SplitIndices s = split_dataset(n);
    CHECK(s.train.begin == 0);
    CHECK(s.train.end == s.validation.begin);
    CHECK(s.validation.end == s.test.begin);
    CHECK(s.test.end == n);
    CHECK(s.train.size() > 0);
    CHECK(s.validation.size() > 0);
    CHECK(s.test.size() > 0);
    CHECK(s.train.size() == static_cast<std::size_t>(0.8 * static_cast<double>(n)));
    const auto dv = static_cast<long>(s.validation.size());
    const auto dt = static_cast<long>(s.test.size());
    CHECK(std::abs(dv - dt) <= 1);
  }
}

TEST_CASE("compute_stats basics") {
  Matrix m(3, 2);
  m.col(0) << 5.0, 5.0, 5.0;
  m.col(1) << 1.0, 2.0, 3.0;
  const FeatureStats s = compute_stats(m, {0, 3});
  CHECK(s.mean(0) == doctest::Approx(5.0));
  CHECK(s.stddev(0) == doctest::Approx(0.0));
  CHECK(s.mean(1) == doctest::Approx(2.0));
  CHECK(s.stddev(1) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("compute_stats agrees with an independent two-pass oracle") {
  const YearDataset ds = generate_synthetic_year(11);
  const Matrix m = feature_matrix(ds);
  const SplitIndices split = split_dataset(ds.size());
  const FeatureStats s = compute_stats(m, split.train);
  for (int c = 0; c < kFeatureCount; ++c) {
    std::vector<double> xs;
    for (std::size_t i = split.train.begin; i < split.train.end; ++i)
      xs.push_back(m(static_cast<Eigen::Index>(i), c));
    const auto [mean, sd] = two_pass_stats(xs);
    CHECK(s.mean(c) == doctest::Approx(mean).epsilon(1e-9));
    CHECK(s.stddev(c) == doctest::Approx(sd).epsilon(1e-9));
  }
}

TEST_CASE("normalize maps mean to zero and mean+std to one") {
  Matrix m(4, 1);
  m.col(0) << 2.0, 4.0, 2.0, 4.0;  // mean 3, std 1
  const FeatureStats s = compute_stats(m, {0, 4});
  CHECK(s.stddev(0) == doctest::Approx(1.0));
  const Matrix z = normalize(m, s);
  CHECK(z(0, 0) == doctest::Approx(-1.0));
  Matrix probe(1, 1);
  probe(0, 0) = s.mean(0) + s.stddev(0);
  CHECK(normalize(probe, s)(0, 0) == doctest::Approx(1.0));

  Matrix constant(3, 1);
  constant.setConstant(7.5);
  FeatureStats cs = compute_stats(constant, {0, 3});
  CHECK(normalize(constant, cs).isZero());
}

TEST_CASE("normalize round-trips through denormalize") {
  const YearDataset ds = generate_synthetic_year(13);
  const Matrix m = feature_matrix(ds);
  const FeatureStats s = compute_stats(m, {0, ds.size()});
  const Matrix back = denormalize(normalize(m, s), s);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double a = m.data()[i];
    const double b = back.data()[i];
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("training block normalizes to mean 0 and std 1") {
  const YearDataset ds = generate_synthetic_year(17);
  const Matrix m = feature_matrix(ds);
  const SplitIndices split = split_dataset(ds.size());
  const FeatureStats s = compute_stats(m, split.train);
  const Matrix z = normalize(m, s);
  const FeatureStats zs = compute_stats(z, split.train);
  for (int c = 0; c < kFeatureCount; ++c) {
    CHECK(std::abs(zs.mean(c)) < 1e-9);
    if (s.stddev(c) > 0.0) CHECK(std::abs(zs.stddev(c) - 1.0) < 1e-9);
  }
}

TEST_CASE("make_windows enumerates next-step samples") {
  Matrix f(5, 2);
  f << 0, 10, 1, 11, 2, 12, 3, 13, 4, 14;
  Vector labels(5);
  labels << 100, 101, 102, 103, 104;
  const WindowSet ws = make_windows(f, labels, 2, 1);
  REQUIRE(ws.count() == 3);
  CHECK(ws.sample(0)(0, 0) == 0);   // row 0, feature 0
  CHECK(ws.sample(0)(0, 1) == 1);   // row 1, feature 0
  CHECK(ws.sample(0)(1, 1) == 11);  // row 1, feature 1
  CHECK(ws.y(0) == 102);            // next step after rows {0,1}
  CHECK(ws.y(2) == 104);
  CHECK(ws.target_row(0) == 2);
}

TEST_CASE("make_windows counts and errors") {
  const Matrix f = Matrix::Random(7008, 5);
  const Vector l = Vector::Random(7008);
  CHECK(make_windows(f, l, 24).count() == 6984);
  CHECK_THROWS_AS(make_windows(Matrix::Random(5, 5), Vector::Random(5), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_windows(Matrix::Random(5, 5), Vector::Random(5), 9),
                  std::invalid_argument);
}

TEST_CASE("synthetic year is deterministic per seed") {
  CHECK(generate_synthetic_year(42) == generate_synthetic_year(42));
  CHECK(generate_synthetic_year(42) != generate_synthetic_year(43));
}

TEST_CASE("synthetic year keeps deep night dark") {
  const YearDataset ds = generate_synthetic_year(0);
  for (const WeatherRecord& r : ds.records)
    if (r.hour <= 3) CHECK(r.irradiance_collector == 0.0);
}

TEST_CASE("synthetic year demand averages near the configured mean") {
  SynthParams site;
  site.demand_mean = 1.5;
  const YearDataset ds = generate_synthetic_year(5, site);
  double mean = 0.0;
  for (const WeatherRecord& r : ds.records) mean += r.demand_unit;
  mean /= static_cast<double>(ds.size());
  CHECK(mean > 0.8 * site.demand_mean);
  CHECK(mean < 1.2 * site.demand_mean);
}

TEST_CASE("synthetic year satisfies all record invariants") {
  const YearDataset ds = generate_synthetic_year(99);
  CHECK_NOTHROW(validate_year(ds));
}
