#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "weldlab/config.hpp"
#include "weldlab/experiments.hpp"
#include "weldlab/parallel.hpp"
#include "weldlab/report.hpp"
#include "weldlab/rng.hpp"

namespace weldlab::detail {

// Each experiment draws from its own block of stream ids so that replica i of
// different experiments never share noise.
constexpr std::uint64_t stream_block = 1ULL << 32;

Report start_report(const ExperimentConfig& cfg);

inline RngStream replica_stream(const ExperimentConfig& cfg, std::uint64_t block, std::size_t index) {
  return RngStream(cfg.seed, block * stream_block + index);
}

template <class R, class F>
std::vector<R> replicate(const ExperimentConfig& cfg, F&& fn) {
  return run_replicas<R>(cfg.replicas, cfg.workers, std::forward<F>(fn));
}

Criterion make_criterion(const std::string& id, const std::string& claim, double value,
                         const std::string& comparison, double threshold, const std::string& detail = "");

Json to_json(const std::vector<double>& v);

// Registration hooks, one per translation unit.
void register_flow_experiments(std::vector<Experiment>& out);
void register_path_experiments(std::vector<Experiment>& out);
void register_field_experiments(std::vector<Experiment>& out);
void register_welding_experiments(std::vector<Experiment>& out);

}  // namespace weldlab::detail
