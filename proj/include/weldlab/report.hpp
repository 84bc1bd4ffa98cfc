#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace weldlab {

using Json = nlohmann::ordered_json;

struct Criterion {
  std::string id;
  std::string claim;
  bool pass = false;
  double value = 0.0;
  std::string comparison;  // e.g. "<=", ">", "=="
  double threshold = 0.0;
  std::string detail;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Everything in a report is a function of the resolved configuration and the
// seed; worker counts and wall-clock data are deliberately absent.
class Report {
 public:
  std::string experiment;
  std::string anchor;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Json> records;  // ordered by replica index
  Json summary = Json::object();
  std::vector<Series> series;
  std::vector<Criterion> criteria;
  std::vector<std::string> notes;

  void add_criterion(Criterion c) { criteria.push_back(std::move(c)); }
  bool passed() const;

  std::string ndjson() const;
  std::string text() const;
  // Writes <dir>/<experiment>.ndjson and <dir>/<experiment>.summary.txt.
  void write(const std::string& dir) const;
};

std::string format_double(double v);

// Reads the series back out of an NDJSON report.
std::vector<Series> read_series(const std::string& ndjson_path);
// Writes one gnuplot two-column file per series; returns the paths written.
std::vector<std::string> write_plot_data(const std::vector<Series>& series, const std::string& dir);

}  // namespace weldlab
