// End-to-end checks of the command-line surface. Each test runs the real
// binary in a scratch directory.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "netload/csv.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return NETLOAD_CLI_PATH; }

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("netload_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// small-but-real training setup so CLI runs finish in seconds
std::string tiny_config_json(const fs::path& input, int epochs) {
  std::ostringstream ss;
  ss << "{\n"
     << "  \"input_csv\": \"" << input.string() << "\",\n"
     << "  \"pipeline\": {\"window\": 6, \"epochs\": " << epochs
     << ", \"batch_size\": 64, \"early_stop_patience\": 0,\n"
     << "    \"lstm_hidden\": [8, 8, 8], \"dense_hidden\": 8, \"max_threads\": 2}\n"
     << "}\n";
  return ss.str();
}

}  // namespace

TEST_CASE("synth emits a parseable, deterministic year") {
  Scratch a, b;
  REQUIRE(run("synth --seed 5 --out " + a.dir.string()) == 0);
  REQUIRE(run("synth --seed 5 --out " + b.dir.string()) == 0);
  const std::string csv_a = slurp(a.dir / "synthetic_year.csv");
  CHECK(csv_a == slurp(b.dir / "synthetic_year.csv"));  // byte identical

  CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 8761);  // header + 8760 rows
  CHECK_NOTHROW(netload::parse_tmy_csv(csv_a));

  // different seed, different bytes
  Scratch c;
  REQUIRE(run("synth --seed 6 --out " + c.dir.string()) == 0);
  CHECK(csv_a != slurp(c.dir / "synthetic_year.csv"));
}

TEST_CASE("synth refuses to overwrite without --force") {
  Scratch s;
  REQUIRE(run("synth --seed 1 --out " + s.dir.string()) == 0);
  CHECK(run("synth --seed 1 --out " + s.dir.string()) != 0);
  CHECK(run("synth --seed 1 --out " + s.dir.string() + " --force") == 0);
}

TEST_CASE("derive emits consistent series files") {
  Scratch s;
  REQUIRE(run("synth --seed 2 --out " + s.dir.string()) == 0);
  const fs::path input = s.dir / "synthetic_year.csv";
  REQUIRE(run("derive --input " + input.string() + " --out " + s.dir.string()) == 0);

  // net_load.csv must equal the composition of the other emitted columns
  const netload::YearDataset ds = netload::load_tmy_csv(input.string());
  std::ifstream wind_in(s.dir / "wind_power.csv"), solar_in(s.dir / "solar_power.csv"),
      net_in(s.dir / "net_load.csv");
  std::string line;
  std::getline(wind_in, line);
  CHECK(line == "day,hour,wind_W");
  std::getline(solar_in, line);
  CHECK(line == "day,hour,solar_W");
  std::getline(net_in, line);
  CHECK(line == "day,hour,netload_kW");
  std::size_t row = 0;
  while (std::getline(net_in, line)) {
    std::string wl, sl;
    REQUIRE(std::getline(wind_in, wl));
    REQUIRE(std::getline(solar_in, sl));
    const double wind_w = std::stod(wl.substr(wl.rfind(',') + 1));
    const double solar_w = std::stod(sl.substr(sl.rfind(',') + 1));
    const double net_kw = std::stod(line.substr(line.rfind(',') + 1));
    const double expected = 60.0 * ds[row].demand_unit - (wind_w + solar_w) / 1000.0;
    CHECK(net_kw == doctest::Approx(expected).epsilon(1e-9));
    ++row;
  }
  CHECK(row == 8760);
}

TEST_CASE("derive zeroes the solar column on an all-night input") {
  Scratch s;
  REQUIRE(run("synth --seed 3 --out " + s.dir.string()) == 0);
  netload::YearDataset ds = netload::load_tmy_csv((s.dir / "synthetic_year.csv").string());
  for (auto& r : ds.records) r.irradiance_collector = 0.0;
  write(s.dir / "dark.csv", netload::serialize_tmy_csv(ds));
  REQUIRE(run("derive --input " + (s.dir / "dark.csv").string() + " --out " + s.dir.string()) ==
          0);
  std::ifstream solar_in(s.dir / "solar_power.csv");
  std::string line;
  std::getline(solar_in, line);
  while (std::getline(solar_in, line))
    CHECK(line.substr(line.rfind(',') + 1) == "0");
}

TEST_CASE("malformed config fails with a diagnostic naming the key") {
  Scratch s;
  write(s.dir / "bad.json", "{\"pipeline\": {\"window\": \"wide\"}}");
  const std::string cmd = std::string(cli_path()) + " derive --config " +
                          (s.dir / "bad.json").string() + " 2> " +
                          (s.dir / "err.txt").string();
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) != 0);
  const std::string err = slurp(s.dir / "err.txt");
  CHECK(err.find("pipeline.window") != std::string::npos);
}

TEST_CASE("train writes a snapshot, loss curve, and report") {
  Scratch s;
  REQUIRE(run("synth --seed 4 --out " + s.dir.string()) == 0);
  write(s.dir / "config.json", tiny_config_json(s.dir / "synthetic_year.csv", 2));
  REQUIRE(run("train --config " + (s.dir / "config.json").string() + " --approach direct --out " +
              s.dir.string()) == 0);
  CHECK(fs::exists(s.dir / "model_direct.bin"));
  CHECK(fs::exists(s.dir / "report_direct.json"));
  const std::string loss = slurp(s.dir / "loss_direct.csv");
  CHECK(std::count(loss.begin(), loss.end(), '\n') == 3);  // header + one row per epoch

  // epochs 0 still produces a snapshot and report
  Scratch z;
  REQUIRE(run("synth --seed 4 --out " + z.dir.string()) == 0);
  write(z.dir / "config.json", tiny_config_json(z.dir / "synthetic_year.csv", 0));
  REQUIRE(run("train --config " + (z.dir / "config.json").string() + " --approach direct --out " +
              z.dir.string()) == 0);
  CHECK(fs::exists(z.dir / "model_direct.bin"));
  CHECK(fs::exists(z.dir / "report_direct.json"));
  const std::string loss0 = slurp(z.dir / "loss_direct.csv");
  CHECK(std::count(loss0.begin(), loss0.end(), '\n') == 1);  // header only
}

TEST_CASE("train creates fresh output directories and refuses silent overwrites") {
  Scratch s;
  REQUIRE(run("synth --seed 15 --out " + s.dir.string()) == 0);
  write(s.dir / "config.json", tiny_config_json(s.dir / "synthetic_year.csv", 1));
  const std::string fresh = (s.dir / "out" / "nested").string();
  REQUIRE(run("train --config " + (s.dir / "config.json").string() + " --approach direct --out " +
              fresh) == 0);
  CHECK(fs::exists(fs::path(fresh) / "model_direct.bin"));
  const auto stamp = fs::last_write_time(fs::path(fresh) / "model_direct.bin");
  CHECK(run("train --config " + (s.dir / "config.json").string() + " --approach direct --out " +
            fresh) != 0);
  CHECK(fs::last_write_time(fs::path(fresh) / "model_direct.bin") == stamp);  // untouched
  CHECK(run("train --config " + (s.dir / "config.json").string() + " --approach direct --out " +
            fresh + " --force") == 0);
}

TEST_CASE("predict requires a model and aligns to the window offset") {
  Scratch s;
  CHECK(run("predict --model " + (s.dir / "missing.bin").string() + " --input x.csv") != 0);

  REQUIRE(run("synth --seed 8 --out " + s.dir.string()) == 0);
  write(s.dir / "config.json", tiny_config_json(s.dir / "synthetic_year.csv", 1));
  REQUIRE(run("train --config " + (s.dir / "config.json").string() + " --approach direct --out " +
              s.dir.string()) == 0);
  REQUIRE(run("predict --model " + (s.dir / "model_direct.bin").string() + " --input " +
              (s.dir / "synthetic_year.csv").string() + " --out " + s.dir.string()) == 0);
  std::ifstream in(s.dir / "predictions.csv");
  std::string header, first;
  std::getline(in, header);
  CHECK(header == "day,hour,netload_kW_pred");
  std::getline(in, first);
  // window 6, horizon 1: first target is row index 6 -> day 1, hour 6
  CHECK(first.rfind("1,6,", 0) == 0);
  std::size_t rows = 1;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8760 - 6);
}

TEST_CASE("reloaded snapshot reproduces the report's test predictions bit-exactly") {
  Scratch s;
  REQUIRE(run("synth --seed 14 --out " + s.dir.string()) == 0);
  write(s.dir / "config.json", tiny_config_json(s.dir / "synthetic_year.csv", 1));
  REQUIRE(run("train --config " + (s.dir / "config.json").string() + " --approach direct --out " +
              s.dir.string()) == 0);
  REQUIRE(run("predict --model " + (s.dir / "model_direct.bin").string() + " --input " +
              (s.dir / "synthetic_year.csv").string() + " --out " + s.dir.string()) == 0);

  // report rows: day,hour,actual,predicted ; prediction rows: day,hour,value
  std::map<std::string, std::string> from_report;
  {
    std::ifstream in(s.dir / "predictions_direct.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto comma2 = line.find(',', line.find(',') + 1);
      const auto key = line.substr(0, comma2);
      from_report[key] = line.substr(line.rfind(',') + 1);
    }
  }
  REQUIRE(!from_report.empty());
  std::ifstream in(s.dir / "predictions.csv");
  std::string line;
  std::getline(in, line);
  std::size_t matched = 0;
  while (std::getline(in, line)) {
    const auto comma2 = line.find(',', line.find(',') + 1);
    const auto it = from_report.find(line.substr(0, comma2));
    if (it == from_report.end()) continue;
    CHECK(line.substr(comma2 + 1) == it->second);  // identical formatted value
    ++matched;
  }
  CHECK(matched == from_report.size());
}

TEST_CASE("compare emits both reports and a comparison with reference rows") {
  Scratch s;
  REQUIRE(run("synth --seed 9 --out " + s.dir.string()) == 0);
  write(s.dir / "config.json", tiny_config_json(s.dir / "synthetic_year.csv", 1));
  REQUIRE(run("compare --config " + (s.dir / "config.json").string() + " --out " +
              s.dir.string()) == 0);
  for (const char* f :
       {"report_direct.json", "report_indirect.json", "comparison.json", "histogram_direct.csv",
        "histogram_indirect.csv", "predictions_direct.csv", "predictions_indirect.csv"})
    CHECK(fs::exists(s.dir / f));
  const std::string cmp = slurp(s.dir / "comparison.json");
  for (const char* needle : {"\"MAE\"", "\"MSE\"", "\"RMSE\"", "\"nRMSE\"",
                             "tolerance_fraction", "9.48166", "12.1504", "0.09453"})
    CHECK(cmp.find(needle) != std::string::npos);
}

TEST_CASE("compare is byte-deterministic for a fixed seed") {
  Scratch a, b;
  for (Scratch* s : {&a, &b}) {
    REQUIRE(run("synth --seed 21 --out " + s->dir.string()) == 0);
    write(s->dir / "config.json", tiny_config_json(s->dir / "synthetic_year.csv", 1));
    REQUIRE(run("compare --config " + (s->dir / "config.json").string() + " --seed 21 --out " +
                s->dir.string()) == 0);
  }
  for (const char* f : {"comparison.json", "report_direct.json", "report_indirect.json",
                        "predictions_direct.csv", "predictions_indirect.csv"})
    CHECK(slurp(a.dir / f) == slurp(b.dir / f));
}
