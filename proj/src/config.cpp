#include "weldlab/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "weldlab/errors.hpp"

namespace weldlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size();
}

bool parse_integer(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtol(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  long v = 0;
  if (!parse_integer(value, v) || v < 0)
    throw InvalidArgument("config: '" + key + "' must be a non-negative integer, got '" + value + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "seed") {
    seed = parse_count(key, value);
  } else if (key == "replicas") {
    replicas = parse_count(key, value);
  } else if (key == "workers") {
    workers = parse_count(key, value);
    if (workers == 0) throw InvalidArgument("config: workers must be at least 1");
  } else if (key == "out") {
    out_dir = value;
  } else if (key == "name") {
    name = value;
  } else {
    values_[key] = value;
  }
}

void ExperimentConfig::validate(const std::vector<ParamSpec>& declared) {
  std::map<std::string, const ParamSpec*> known;
  for (const auto& p : declared) known[p.key] = &p;
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) {
      std::string msg = "config: unknown key '" + key + "'";
      if (!name.empty()) msg += " for experiment " + name;
      msg += "; accepted keys:";
      for (const auto& p : declared) msg += " " + p.key;
      throw InvalidArgument(msg);
    }
  }
  for (const auto& p : declared)
    if (!values_.count(p.key)) values_[p.key] = p.default_value;
  for (const auto& p : declared) {
    const std::string& v = values_.at(p.key);
    bool ok = true;
    double d = 0.0;
    long l = 0;
    switch (p.kind) {
      case ParamKind::real: ok = parse_real(v, d); break;
      case ParamKind::integer: ok = parse_integer(v, l); break;
      case ParamKind::real_list:
        for (const auto& item : split_list(v)) ok = ok && parse_real(item, d);
        ok = ok && !v.empty();
        break;
      case ParamKind::text: break;
    }
    if (!ok) throw InvalidArgument("config: bad value '" + v + "' for key '" + p.key + "'");
  }
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("config: missing key '" + key + "'");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const {
  double d = 0.0;
  if (!parse_real(raw(key), d)) throw InvalidArgument("config: '" + key + "' is not a number");
  return d;
}

long ExperimentConfig::integer(const std::string& key) const {
  long l = 0;
  if (!parse_integer(raw(key), l)) throw InvalidArgument("config: '" + key + "' is not an integer");
  return l;
}

std::vector<double> ExperimentConfig::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) {
    double d = 0.0;
    if (!parse_real(item, d)) throw InvalidArgument("config: '" + key + "' is not a list of numbers");
    out.push_back(d);
  }
  return out;
}

const std::string& ExperimentConfig::text(const std::string& key) const { return raw(key); }

}  // namespace weldlab
