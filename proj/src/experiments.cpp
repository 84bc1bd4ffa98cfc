#include "weldlab/experiments.hpp"

#include <algorithm>
#include <utility>

#include "experiments_common.hpp"
#include "weldlab/errors.hpp"

namespace weldlab {

namespace detail {

Report start_report(const ExperimentConfig& cfg) {
  const Experiment& e = find_experiment(cfg.name);
  Report r;
  r.experiment = e.name;
  r.anchor = e.anchor;
  r.seed = cfg.seed;
  r.replicas = cfg.replicas;
  for (const auto& kv : cfg.values()) r.config.push_back(kv);
  return r;
}

Criterion make_criterion(const std::string& id, const std::string& claim, double value,
                         const std::string& comparison, double threshold, const std::string& detail) {
  Criterion c{id, claim, false, value, comparison, threshold, detail};
  if (comparison == "<=") c.pass = value <= threshold;
  else if (comparison == "<") c.pass = value < threshold;
  else if (comparison == ">=") c.pass = value >= threshold;
  else if (comparison == ">") c.pass = value > threshold;
  else if (comparison == "==") c.pass = value == threshold;
  else throw InvalidArgument("criterion: unknown comparison '" + comparison + "'");
  return c;
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace detail

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> experiments = [] {
    std::vector<Experiment> out;
    detail::register_field_experiments(out);
    detail::register_flow_experiments(out);
    detail::register_path_experiments(out);
    detail::register_welding_experiments(out);
    return out;
  }();
  return experiments;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  std::string msg = "unknown experiment '" + name + "'; registered experiments:";
  for (const auto& e : registry()) msg += " " + e.name;
  throw InvalidArgument(msg);
}

Report run_experiment(ExperimentConfig cfg) {
  const Experiment& e = find_experiment(cfg.name);
  cfg.validate(e.params);
  if (cfg.replicas == 0) cfg.replicas = e.default_replicas;
  return e.run(cfg);
}

}  // namespace weldlab
