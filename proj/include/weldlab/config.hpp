#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace weldlab {

enum class ParamKind { real, integer, real_list, text };

struct ParamSpec {
  std::string key;
  ParamKind kind = ParamKind::real;
  std::string default_value;
  std::string help;
};

// Flat `key = value` configuration; `#` starts a comment. The keys seed,
// replicas, workers and out are common to every experiment.
class ExperimentConfig {
 public:
  std::string name;
  std::uint64_t seed = 1;
  std::size_t replicas = 0;  // 0 selects the experiment default
  std::size_t workers = 1;
  std::string out_dir = "out";

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Fills defaults and type-checks every value; unknown keys are rejected.
  void validate(const std::vector<ParamSpec>& declared);

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;
  const std::string& text(const std::string& key) const;

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace weldlab
