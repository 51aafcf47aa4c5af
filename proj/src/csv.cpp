#include "netload/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace netload {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

// strict full-width numeric parse; rejects stray characters
double parse_number(std::string_view cell, std::size_t row, const char* column) {
  double value = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw CsvError(row, std::string("non-numeric ") + column + " value '" + std::string(cell) + "'");
  return value;
}

int parse_int(std::string_view cell, std::size_t row, const char* column) {
  int value = 0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw CsvError(row, std::string("non-integer ") + column + " value '" + std::string(cell) + "'");
  return value;
}

void split_fields(std::string_view line, std::string_view out[], std::size_t n, std::size_t row) {
  std::size_t field = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (field >= n) throw CsvError(row, "expected 6 columns");
      out[field++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (field != n) throw CsvError(row, "expected 6 columns, got " + std::to_string(field));
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

YearDataset parse_tmy_csv(std::istream& in, bool allow_leap) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError(0, "empty input");
  if (strip_cr(line) != kCsvHeader)
    throw CsvError(0, std::string("bad header, expected '") + kCsvHeader + "'");

  YearDataset ds;
  ds.records.reserve(kHoursPerYear);
  std::size_t row = 0;
  int expect_day = 1, expect_hour = 0;
  while (std::getline(in, line)) {
    const std::string_view sv = strip_cr(line);
    if (sv.empty()) break;  // tolerate a trailing blank line
    ++row;
    std::string_view f[6];
    split_fields(sv, f, 6, row);
    WeatherRecord rec;
    rec.day = parse_int(f[0], row, "day");
    rec.hour = parse_int(f[1], row, "hour");
    rec.temp_ambient = parse_number(f[2], row, "temp_K");
    rec.wind_speed = parse_number(f[3], row, "wind_mps");
    rec.irradiance_collector = parse_number(f[4], row, "irradiance_Wm2");
    rec.demand_unit = parse_number(f[5], row, "demand_kW");
    try {
      check_record_fields(rec, allow_leap);
    } catch (const ValidationError& e) {
      throw CsvError(row, e.what());
    }
    if (rec.day != expect_day || rec.hour != expect_hour) {
      const bool behind =
          rec.day < expect_day || (rec.day == expect_day && rec.hour < expect_hour);
      if (behind)
        throw CsvError(row, "duplicate or out-of-order timestamp day " + std::to_string(rec.day) +
                                " hour " + std::to_string(rec.hour));
      throw CsvError(row, "chronological gap: expected day " + std::to_string(expect_day) +
                              " hour " + std::to_string(expect_hour) + ", got day " +
                              std::to_string(rec.day) + " hour " + std::to_string(rec.hour));
    }
    if (++expect_hour == 24) {
      expect_hour = 0;
      ++expect_day;
    }
    ds.records.push_back(rec);
  }
  validate_year(ds, allow_leap);
  return ds;
}

YearDataset parse_tmy_csv(const std::string& text, bool allow_leap) {
  std::istringstream in(text);
  return parse_tmy_csv(in, allow_leap);
}

YearDataset load_tmy_csv(const std::string& path, bool allow_leap) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");
  return parse_tmy_csv(in, allow_leap);
}

void serialize_tmy_csv(std::ostream& out, const YearDataset& ds) {
  out << kCsvHeader << '\n';
  for (const WeatherRecord& r : ds.records) {
    out << r.day << ',' << r.hour << ',' << format_double(r.temp_ambient) << ','
        << format_double(r.wind_speed) << ',' << format_double(r.irradiance_collector) << ','
        << format_double(r.demand_unit) << '\n';
  }
}

std::string serialize_tmy_csv(const YearDataset& ds) {
  std::ostringstream out;
  serialize_tmy_csv(out, ds);
  return out.str();
}

}  // namespace netload
