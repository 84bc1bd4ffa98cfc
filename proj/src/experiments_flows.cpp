#include <algorithm>
#include <cmath>

#include "experiments_common.hpp"
#include "weldlab/errors.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/stats.hpp"

namespace weldlab::detail {

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ------------------------------------------------------------------ exp_loewner

Report run_loewner(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const double T = cfg.real("horizon"), dt = cfg.real("dt"), tol = cfg.real("tolerance");
  const LoewnerFlow fwd(zero_driving(T, dt), FlowDirection::forward);
  const LoewnerFlow rev(zero_driving(T, dt), FlowDirection::reverse);
  const std::vector<cplx> zs{{1.0, 1.0}, {-0.5, 0.2}, {0.0, 3.0}, {0.1, 0.01}, {-4.0, 0.5}, {2.0, 1e-3}};
  const std::vector<double> ts{0.05, 0.25, 0.5, T};

  double e_fwd = 0.0, e_rev = 0.0, e_real = 0.0, e_sigma = 0.0, e_cap = 0.0;
  for (double t : ts)
    for (const cplx& z : zs) {
      e_fwd = std::max(e_fwd, rel_err(fwd.forward_map(t, z), sqrt_upper(z * z + 4.0 * t)));
      e_rev = std::max(e_rev, rel_err(rev.reverse_map(t, z), sqrt_upper(z * z - 4.0 * t)));
    }
  for (double t : ts)
    for (double x : {-3.0, -2.5, 2.5, 3.0, 5.0}) {
      const double exact = (x < 0 ? -1.0 : 1.0) * std::sqrt(x * x - 4.0 * t);
      e_real = std::max(e_real, rel_err(rev.reverse_map(t, cplx(x, 0.0)), cplx(exact, 0.0)));
    }
  for (int i = -20; i <= 20; ++i) {
    const double x = 2.0 * std::sqrt(T) * i / 21.0;
    if (x == 0.0) continue;
    e_sigma = std::max(e_sigma, std::fabs(rev.swallow_time(x) - x * x / 4.0) / (x * x / 4.0));
  }
  // Capacity additivity: evolving to t1 and then on to t2 equals evolving to t2.
  RngStream rng = replica_stream(cfg, 3, 0);
  const LoewnerFlow sle(sample_driving(4.0, T, dt, rng), FlowDirection::forward);
  for (const LoewnerFlow* f : {&fwd, &sle})
    for (const cplx& z : zs)
      for (double t1 : {0.1, 0.1234567, 0.3000001})
        for (double t2 : {0.5, T}) {
          const cplx two_stage = f->forward_between(t1, t2, f->forward_map(t1, z));
          e_cap = std::max(e_cap, rel_err(two_stage, f->forward_map(t2, z)));
        }
  rep.records.push_back(Json{{"forward", e_fwd}, {"reverse", e_rev}, {"reverse_real", e_real},
                             {"swallow", e_sigma}, {"capacity_additivity", e_cap}});
  rep.summary["max_relative_error"] = std::max({e_fwd, e_rev, e_real, e_sigma, e_cap});
  rep.add_criterion(make_criterion("loewner-forward-closed-form",
                                   "with zero driving the forward map is sqrt(z^2 + 4t)", e_fwd, "<=", tol));
  rep.add_criterion(make_criterion("loewner-reverse-closed-form",
                                   "with zero driving the reverse map is sqrt(z^2 - 4t) on and off the line",
                                   std::max(e_rev, e_real), "<=", tol));
  rep.add_criterion(make_criterion("loewner-swallow-closed-form",
                                   "with zero driving x is swallowed at time x^2/4", e_sigma, "<=", tol));
  rep.add_criterion(make_criterion("loewner-capacity-additivity",
                                   "flows compose additively in half-plane capacity", e_cap, "<=", tol));
  return rep;
}

// ------------------------------------------------------------------ exp_flows

Report run_flows(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const double T = cfg.real("horizon"), dt = cfg.real("dt"), eps = cfg.real("elevation"),
               K = cfg.real("space_range");
  const int N = static_cast<int>(cfg.integer("ladder"));
  require(N >= 2, "exp_flows: ladder needs at least two rungs");
  const double H = cfg.real("swallow_horizon");
  require(H >= T, "exp_flows: swallow_horizon must be at least the horizon");
  const std::size_t steps = static_cast<std::size_t>(std::llround(H / dt));
  CaratheodoryMesh mesh;
  std::vector<double> xmesh(mesh.swallow_points);
  for (std::size_t l = 0; l < xmesh.size(); ++l)
    xmesh[l] = -K + 2.0 * K * static_cast<double>(l) / (xmesh.size() - 1);

  struct Out {
    std::vector<double> dist;
    std::size_t swallow_violations = 0;
  };
  const auto outs = replicate<Out>(cfg, [&](std::size_t i) {
    RngStream rng = replica_stream(cfg, 4, i);
    std::vector<double> bm(steps + 1, 0.0);
    for (std::size_t k = 1; k <= steps; ++k) bm[k] = bm[k - 1] + std::sqrt(dt) * rng.normal();
    const LoewnerFlow limit(driving_from_brownian(bm, 4.0, dt), FlowDirection::reverse);
    Out o;
    // sigma*_n(x) = sigma_n(sqrt(kappa_n) x / 2) is non-decreasing in n and bounded by sigma(x).
    std::vector<double> prev(xmesh.size(), -1.0);
    const auto sigma = limit.swallow_times(xmesh);
    for (int n = 1; n <= N; ++n) {
      const double kappa = 4.0 - std::ldexp(1.0, -n);
      const LoewnerFlow f(driving_from_brownian(bm, kappa, dt), FlowDirection::reverse);
      o.dist.push_back(caratheodory_plus_distance(f, limit, T, eps, K, mesh));
      for (std::size_t l = 0; l < xmesh.size(); ++l) {
        const double s = f.swallow_time(0.5 * std::sqrt(kappa) * xmesh[l]);
        if (s < prev[l] || s > sigma[l]) ++o.swallow_violations;
        prev[l] = s;
      }
    }
    return o;
  });
  std::size_t monotone = 0, violations = 0;
  std::vector<double> med(N);
  for (const auto& o : outs) {
    bool dec = true;
    for (int n = 1; n < N; ++n) dec = dec && o.dist[n] < o.dist[n - 1];
    monotone += dec;
    violations += o.swallow_violations;
    rep.records.push_back(Json{{"distances", to_json(o.dist)},
                               {"monotone", dec},
                               {"swallow_violations", o.swallow_violations}});
  }
  std::vector<std::pair<double, double>> pts;
  for (int n = 0; n < N; ++n) {
    std::vector<double> v;
    for (const auto& o : outs) v.push_back(o.dist[n]);
    med[n] = median(v);
    pts.emplace_back(n + 1, med[n]);
  }
  rep.series.push_back({"flows_median_distance", pts});
  const double frac = static_cast<double>(monotone) / static_cast<double>(outs.size());
  rep.summary["median_distance"] = to_json(med);
  rep.summary["monotone_fraction"] = frac;
  rep.summary["swallow_violations"] = violations;
  rep.add_criterion(make_criterion(
      "flows-distance-monotone",
      "reverse flows driven by sqrt(kappa) B approach the kappa = 4 flow monotonically as kappa rises to 4", frac,
      ">=", cfg.real("monotone_fraction")));
  rep.add_criterion(make_criterion(
      "flows-swallow-monotone",
      "rescaled swallowing times increase with kappa towards the kappa = 4 swallowing times in every trial",
      static_cast<double>(violations), "==", 0.0));
  return rep;
}

}  // namespace

void register_flow_experiments(std::vector<Experiment>& out) {
  using K = ParamKind;
  out.push_back({"exp_loewner",
                 "Loewner flows with zero driving match their closed forms and compose additively in capacity",
                 1,
                 {{"horizon", K::real, "1", "time horizon"},
                  {"dt", K::real, "0.001", "driving step"},
                  {"tolerance", K::real, "1e-9", "relative tolerance"}},
                 run_loewner});
  out.push_back({"exp_flows",
                 "centred reverse SLE_kappa flows converge to reverse SLE_4 in the Caratheodory+ sense as kappa rises to 4",
                 200,
                 {{"horizon", K::real, "1", "time horizon"},
                  {"swallow_horizon", K::real, "2", "driving length used for swallowing times"},
                  {"dt", K::real, "0.0001", "driving step"},
                  {"elevation", K::real, "0.1", "imaginary part of the test points"},
                  {"space_range", K::real, "2", "half-width of the test points"},
                  {"ladder", K::integer, "6", "kappa_n = 4 - 2^-n for n = 1..ladder"},
                  {"monotone_fraction", K::real, "0.95", "required fraction of monotone trials"}},
                 run_flows});
}

}  // namespace weldlab::detail
