#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "weldlab/errors.hpp"
#include "weldlab/experiments.hpp"

int main(int argc, char** argv) {
  using namespace weldlab;
  CLI::App app{"lab: experiments on the conformal welding of critical LQG"};
  app.require_subcommand(1);

  std::string name, config_path, out_dir;
  std::uint64_t seed = 1;
  std::size_t replicas = 0, workers = 1;
  auto* run = app.add_subcommand("run", "run an experiment and write its report");
  run->add_option("experiment", name, "registered experiment name")->required();
  run->add_option("--config", config_path, "flat key = value configuration file");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  auto* rep_opt = run->add_option("--replicas", replicas, "number of replicas");
  auto* work_opt = run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto* out_opt = run->add_option("--out", out_dir, "output directory");

  app.add_subcommand("list", "list registered experiments");

  std::string report_path, plot_dir;
  auto* plot = app.add_subcommand("plot-data", "write gnuplot two-column files from a report");
  plot->add_option("report", report_path, "NDJSON report")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_dir, "directory for the .dat files (default: next to the report)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      for (const auto& e : registry())
        std::cout << e.name << "  (" << e.default_replicas << (e.default_replicas == 1 ? " replica)  " : " replicas)  ") << e.anchor << '\n';
      return 0;
    }
    if (app.got_subcommand("plot-data")) {
      if (plot_dir.empty()) {
        const auto slash = report_path.find_last_of('/');
        plot_dir = slash == std::string::npos ? "." : report_path.substr(0, slash);
      }
      for (const auto& p : write_plot_data(read_series(report_path), plot_dir)) std::cout << p << '\n';
      return 0;
    }
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(config_path);
    cfg.name = name;
    if (*seed_opt) cfg.seed = seed;
    if (*rep_opt) cfg.replicas = replicas;
    if (*work_opt) cfg.workers = workers;
    if (*out_opt) cfg.out_dir = out_dir;
    const Report report = run_experiment(cfg);
    report.write(cfg.out_dir);
    std::cout << report.text();
    return report.passed() ? 0 : 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "lab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lab: " << e.what() << '\n';
    return 3;
  }
}
