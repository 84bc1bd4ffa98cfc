#pragma once

#include <functional>
#include <string>
#include <vector>

#include "weldlab/config.hpp"
#include "weldlab/report.hpp"

namespace weldlab {

struct Experiment {
  std::string name;
  std::string anchor;  // the claim the experiment checks, in words
  std::size_t default_replicas = 100;
  std::vector<ParamSpec> params;
  // Receives a validated configuration with replicas resolved.
  std::function<Report(const ExperimentConfig&)> run;
};

const std::vector<Experiment>& registry();
// InvalidArgument listing the registered names when `name` is unknown.
const Experiment& find_experiment(const std::string& name);

// Validates the configuration against the experiment's declared keys before
// any sampling, resolves the replica count and runs it.
Report run_experiment(ExperimentConfig cfg);

}  // namespace weldlab
