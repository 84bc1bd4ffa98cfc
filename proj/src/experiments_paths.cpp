#include <algorithm>
#include <cmath>

#include "experiments_common.hpp"
#include "weldlab/errors.hpp"
#include "weldlab/paths.hpp"
#include "weldlab/stats.hpp"

namespace weldlab::detail {

namespace {

// ------------------------------------------------------------------ exp_rn

Report run_rn(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const double gamma = cfg.real("gamma"), alpha = cfg.real("alpha"), beta = cfg.real("beta"),
               t = cfg.real("time");
  const auto grid = uniform_grid(0.0, t, static_cast<std::size_t>(cfg.integer("steps")));
  struct Out {
    double x = 0.0, w = 0.0;
  };
  const auto outs = replicate<Out>(cfg, [&](std::size_t i) {
    RngStream rng = replica_stream(cfg, 5, i);
    const Path B = sample_bm(grid, 0.0, alpha, 0.0, rng);
    return Out{-B.values.back() + gamma * alpha * t + beta, martingale_weight(B, beta, gamma, alpha, t)};
  });
  std::vector<double> x, w;
  for (const auto& o : outs) {
    rep.records.push_back(Json{{"x", o.x}, {"weight", o.w}});
    x.push_back(o.x);
    w.push_back(o.w);
  }
  const double ess = effective_sample_size(w);
  rep.summary["ess"] = ess;
  rep.summary["mean_weight"] = mean(w);
  rep.add_criterion(make_criterion("rn-effective-size", "the reweighted sample carries enough effective samples",
                                   ess, ">=", cfg.real("min_ess")));
  if (ess >= 20.0) {
    const KsResult ks = ks_test_weighted(x, w, [&](double r) { return bessel3_cdf(r, beta, t, alpha); });
    rep.summary["ks_D"] = ks.D;
    rep.summary["ks_p"] = ks.p;
    rep.add_criterion(make_criterion(
        "rn-bessel-marginal",
        "reweighting by the Girsanov martingale turns -B + gamma alpha t + beta into a Bessel-3 process",
        ks.p, ">", cfg.real("p_threshold")));
  }
  return rep;
}

// ------------------------------------------------------------------ exp_williams

// Bessel-3 paths through Pitman's representation R = 2M - B, with the running
// maximum M of B refined by exact Brownian-bridge maxima inside each step. The
// future infimum of R after time t is M_t, so theta = M at the first hit of
// `level`. Steps shrink 64-fold once R is within six step deviations of the level.
double williams_theta(double level, double dt, RngStream& rng) {
  double b = 0.0, m = 0.0;
  const double coarse = std::sqrt(dt);
  for (std::size_t k = 0; k < 1000000000; ++k) {
    const bool near = 2.0 * m - b > level - 6.0 * coarse;
    const double h = near ? dt / 64.0 : dt;
    const double b1 = b + std::sqrt(h) * rng.normal();
    const double d = b1 - b;
    const double bridge = 0.5 * (b + b1 + std::sqrt(d * d - 2.0 * h * std::log(rng.uniform())));
    m = std::max(m, bridge);
    b = b1;
    if (2.0 * m - b >= level) return m;
  }
  throw NumericFailure("williams_theta: level not reached");
}

Report run_williams(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const double level = cfg.real("level"), dt = cfg.real("dt");
  require(level > 0.0 && dt > 0.0, "exp_williams: level and dt must be positive");
  const auto theta = replicate<double>(cfg, [&](std::size_t i) {
    RngStream rng = replica_stream(cfg, 6, i);
    return williams_theta(level, dt, rng);
  });
  for (double v : theta) rep.records.push_back(Json{{"theta", v}});
  const KsResult ks = ks_test(theta, [&](double x) { return std::clamp(x / level, 0.0, 1.0); });
  rep.summary["mean_theta"] = mean(theta);
  rep.summary["ks_D"] = ks.D;
  rep.summary["ks_p"] = ks.p;
  rep.add_criterion(make_criterion(
      "williams-uniform-minimum",
      "the future minimum of a Bessel-3 process after it first reaches a level is uniform below that level",
      ks.p, ">", cfg.real("p_threshold")));
  return rep;
}

}  // namespace

void register_path_experiments(std::vector<Experiment>& out) {
  using K = ParamKind;
  out.push_back({"exp_rn",
                 "the Girsanov-Bessel martingale reweights drifted Brownian motion into a Bessel-3 process",
                 10000,
                 {{"gamma", K::real, "1", "exponential tilt"},
                  {"alpha", K::real, "1", "Brownian variance per unit time"},
                  {"beta", K::real, "1", "barrier offset"},
                  {"time", K::real, "1", "evaluation time"},
                  {"steps", K::integer, "1000", "time steps"},
                  {"min_ess", K::real, "100", "required effective sample size"},
                  {"p_threshold", K::real, "0.01", "KS acceptance level"}},
                 run_rn});
  out.push_back({"exp_williams",
                 "in the Williams decomposition the minimum level theta is uniform",
                 10000,
                 {{"level", K::real, "5", "level C + beta"},
                  {"dt", K::real, "0.001", "time step"},
                  {"p_threshold", K::real, "0.01", "KS acceptance level"}},
                 run_williams});
}

}  // namespace weldlab::detail
