#include "weldlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weldlab/errors.hpp"

namespace weldlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool Report::passed() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

std::string Report::ndjson() const {
  std::ostringstream os;
  Json header;
  header["type"] = "header";
  header["experiment"] = experiment;
  header["anchor"] = anchor;
  header["seed"] = seed;
  header["replicas"] = replicas;
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  header["config"] = cfg;
  os << header.dump() << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    Json r;
    r["type"] = "replica";
    r["index"] = i;
    for (const auto& [k, v] : records[i].items()) r[k] = v;
    os << r.dump() << '\n';
  }
  Json s;
  s["type"] = "summary";
  for (const auto& [k, v] : summary.items()) s[k] = v;
  os << s.dump() << '\n';
  for (const auto& ser : series) {
    Json j;
    j["type"] = "series";
    j["name"] = ser.name;
    Json pts = Json::array();
    for (const auto& [x, y] : ser.points) pts.push_back(Json::array({x, y}));
    j["points"] = pts;
    os << j.dump() << '\n';
  }
  for (const auto& c : criteria) {
    Json j;
    j["type"] = "criterion";
    j["id"] = c.id;
    j["claim"] = c.claim;
    j["pass"] = c.pass;
    j["value"] = c.value;
    j["comparison"] = c.comparison;
    j["threshold"] = c.threshold;
    j["detail"] = c.detail;
    os << j.dump() << '\n';
  }
  for (const auto& n : notes) {
    Json j;
    j["type"] = "note";
    j["text"] = n;
    os << j.dump() << '\n';
  }
  return os.str();
}

std::string Report::text() const {
  std::ostringstream os;
  os << "experiment: " << experiment << '\n';
  os << "anchor: " << anchor << '\n';
  os << "seed: " << seed << "  replicas: " << replicas << '\n';
  os << "config:\n";
  for (const auto& [k, v] : config) os << "  " << k << " = " << v << '\n';
  os << "summary:\n";
  for (const auto& [k, v] : summary.items()) {
    if (v.is_number()) {
      os << "  " << k << " = " << format_double(v.get<double>()) << '\n';
    } else {
      os << "  " << k << " = " << v.dump() << '\n';
    }
  }
  os << "criteria:\n";
  for (const auto& c : criteria) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.id << ": " << c.claim << '\n';
    os << "         value " << format_double(c.value) << ' ' << c.comparison << ' '
       << format_double(c.threshold);
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  for (const auto& n : notes) os << "note: " << n << '\n';
  return os.str();
}

void Report::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  const std::string base = dir + "/" + experiment;
  {
    std::ofstream f(base + ".ndjson", std::ios::binary);
    if (!f) throw InvalidArgument("report: cannot write " + base + ".ndjson");
    f << ndjson();
  }
  std::ofstream f(base + ".summary.txt", std::ios::binary);
  if (!f) throw InvalidArgument("report: cannot write " + base + ".summary.txt");
  f << text();
}

std::vector<Series> read_series(const std::string& ndjson_path) {
  std::ifstream in(ndjson_path);
  if (!in) throw InvalidArgument("plot-data: cannot open '" + ndjson_path + "'");
  std::vector<Series> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    if (j.value("type", "") != "series") continue;
    Series s;
    s.name = j.at("name").get<std::string>();
    for (const auto& p : j.at("points")) {
      const double x = p.at(0).is_null() ? NAN : p.at(0).get<double>();
      const double y = p.at(1).is_null() ? NAN : p.at(1).get<double>();
      s.points.emplace_back(x, y);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> write_plot_data(const std::vector<Series>& series, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const auto& s : series) {
    const std::string path = dir + "/" + s.name + ".dat";
    std::ofstream f(path);
    if (!f) throw InvalidArgument("plot-data: cannot write " + path);
    f << "# " << s.name << '\n';
    for (const auto& [x, y] : s.points) f << format_double(x) << ' ' << format_double(y) << '\n';
    paths.push_back(path);
  }
  return paths;
}

}  // namespace weldlab
