#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "experiments_common.hpp"
#include "weldlab/errors.hpp"
#include "weldlab/field.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/measures.hpp"
#include "weldlab/stats.hpp"
#include "weldlab/wedges.hpp"
#include "weldlab/welding.hpp"

namespace weldlab::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) { return format_double(v); }

WedgeGridSpec wedge_grid_for(int finest_level) {
  WedgeGridSpec g;
  g.s_max = std::max(g.s_max, finest_level * std::log(2.0) + 1.0);
  return g;
}

// ------------------------------------------------------------------ exp_weld

Report run_weld(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const auto scales = cfg.real_list("scales");
  const double t = cfg.real("capacity"), dt = cfg.real("dt"), beta = cfg.real("beta");
  const double window = cfg.real("window");
  int J = 0;
  for (double e : scales) J = std::max(J, dyadic_level(e));
  const auto xs = standard_grid(static_cast<std::size_t>(cfg.integer("points")), -window, window);
  const NeumannSampler lateral(xs, level_range(0, J));
  const WedgeGridSpec grid = wedge_grid_for(J);
  const std::size_t push_points = static_cast<std::size_t>(cfg.integer("push_points"));

  const auto outs = replicate<std::vector<double>>(cfg, [&](std::size_t i) {
    RngStream rng = replica_stream(cfg, 9, i);
    const WedgeSample w = sample_wedge(2.0, 1.0, Parametrisation::last_exit, grid, lateral, rng);
    const DrivingFunction eta = sample_driving(4.0, t, dt, rng);
    std::vector<double> r;
    try {
      for (const SideLengths& sl : side_lengths(w.field, eta, t, scales, beta, push_points))
        r.push_back(std::fabs(sl.left - sl.right) / (sl.left + sl.right));
    } catch (const InvalidArgument&) {
      r.assign(scales.size(), kInf);  // the hull left the sampled window
    }
    return r;
  });
  std::vector<double> med(scales.size());
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : outs) rep.records.push_back(Json{{"imbalance", to_json(r)}});
  std::size_t lost = 0;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    std::vector<double> v;
    for (const auto& r : outs) {
      v.push_back(r[s]);
      if (std::isinf(r[s])) ++lost;
    }
    med[s] = median(v);
    pts.emplace_back(scales[s], med[s]);
  }
  rep.series.push_back({"weld_median_imbalance", pts});
  rep.summary["median_imbalance"] = to_json(med);
  rep.summary["window_exits"] = lost;
  const TrendResult tr = trend_test(med);
  std::string detail = "medians";
  for (double m : med) detail += " " + num(m);
  rep.add_criterion(make_criterion(
      "weld-length-matching",
      "the two sides of an independent SLE_4 on a (2,1)-wedge carry matching critical lengths as eps shrinks",
      tr.decrease_fraction, "==", 1.0, detail));
  return rep;
}

// ------------------------------------------------------------------ exp_interface

Report run_interface(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const double eps = cfg.real("eps"), beta = cfg.real("beta"), max_length = cfg.real("max_length");
  const double T = cfg.real("capacity"), reach = cfg.real("weld_capacity_factor");
  const std::size_t min_pairs = static_cast<std::size_t>(cfg.integer("min_pairs"));
  require(reach >= 1.0, "exp_interface: weld_capacity_factor must be at least 1");
  const double per_unit = cfg.real("pairs_per_unit"), window = cfg.real("window");
  const int J = dyadic_level(eps);
  const auto xs = standard_grid(static_cast<std::size_t>(cfg.integer("points")), -window, window);
  const NeumannSampler lateral(xs, level_range(0, J));
  const WedgeGridSpec grid = wedge_grid_for(J);

  struct Out {
    bool ok = false;
    DrivingFunction driving;
    double length = 0.0;
    std::size_t pairs = 0;
    bool unresolved = false;
    double simplicity = 0.0;
  };
  const auto outs = replicate<Out>(cfg, [&](std::size_t i) {
    RngStream rng = replica_stream(cfg, 13, i);
    const WedgeSample a = sample_wedge(2.0, 2.0, Parametrisation::last_exit, grid, lateral, rng);
    const WedgeSample b = sample_wedge(2.0, 2.0, Parametrisation::last_exit, grid, lateral, rng);
    const BoundaryMeasure ma = truncated_derivative_measure(a.field, beta, eps);
    const BoundaryMeasure mb = truncated_derivative_measure(b.field, beta, eps);
    // Weld as far as the window allows, then keep the welds up to capacity `reach` T and
    // read the driving on [0, T] from the base, away from the wedge origins at the tip.
    const double available = std::min(ma.mass(0.0, window), mb.mass(-window, 0.0));
    const double length = std::min(max_length, (1.0 - 1e-9) * available);
    Out o;
    if (!(length > 0.0)) return o;
    auto weld_until = [&](double q_max, double per) -> std::optional<Correspondence> {
      Correspondence corr = quantum_correspondence(ma, mb, quantum_grid(q_max, per));
      const WeldedInterface full = build_welding_curve(corr);
      double cap = 0.0;
      std::size_t k = 0;
      while (k < full.maps.size() && cap < reach * T) cap += full.maps[k++].capacity_time();
      if (cap < reach * T) return std::nullopt;
      corr.pairs.resize(k);
      return corr;
    };
    std::optional<Correspondence> corr;
    try {
      corr = weld_until(length, per_unit);
      if (!corr) return o;
      // Refine the lattice when the seam needs fewer than min_pairs welds.
      if (corr->pairs.size() < min_pairs) {
        const double l = corr->pairs.back().q;
        corr = weld_until(std::min(length, 1.5 * l), static_cast<double>(min_pairs) / l);
        if (!corr) return o;
      }
    } catch (const InvalidArgument&) {
      o.unresolved = true;  // quantiles collapse inside a single grid cell
      return o;
    } catch (const DegenerateCorrespondence&) {
      o.unresolved = true;
      return o;
    }
    const WeldedInterface seam = build_welding_curve(*corr);
    o.length = corr->pairs.back().q;
    o.pairs = corr->pairs.size();
    o.driving = seam.driving();
    o.simplicity = seam.simplicity_ratio();
    o.ok = true;
    return o;
  });
  std::size_t reached = 0, unresolved = 0;
  for (const auto& o : outs) {
    reached += o.ok;
    if (o.ok)
      rep.records.push_back(Json{{"reached", true},
                                 {"length", o.length},
                                 {"pairs", o.pairs},
                                 {"horizon", o.driving.horizon()},
                                 {"final_driving", o.driving.at(T)},
                                 {"simplicity", o.simplicity}});
    else
      rep.records.push_back(Json{{"reached", false}, {"unresolved", o.unresolved}});
    unresolved += o.unresolved;
  }
  const double reached_fraction = static_cast<double>(reached) / static_cast<double>(outs.size());
  rep.summary["reached"] = reached;
  rep.summary["reached_fraction"] = reached_fraction;
  rep.summary["unresolved"] = unresolved;
  require(reached >= 20, "exp_interface: too few seams reached the capacity inside the window");

  const std::size_t M = static_cast<std::size_t>(cfg.integer("time_points"));
  std::vector<double> times, vars;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 1; k <= M; ++k) {
    const double tk = T * static_cast<double>(k) / static_cast<double>(M);
    double m2 = 0.0;
    for (const auto& o : outs)
      if (o.ok) m2 += std::pow(o.driving.interpolate(tk), 2);
    times.push_back(tk);
    vars.push_back(m2 / static_cast<double>(reached));
    pts.emplace_back(tk, vars.back());
  }
  rep.series.push_back({"interface_driving_variance", pts});
  const double slope = regression_slope(times, vars);
  rep.summary["variance_slope"] = slope;

  const std::size_t nin = static_cast<std::size_t>(cfg.integer("increments"));
  std::vector<double> inc;
  const double h = T / static_cast<double>(nin);
  for (const auto& o : outs) {
    if (!o.ok) continue;
    for (std::size_t k = 0; k < nin; ++k)
      inc.push_back((o.driving.interpolate((k + 1) * h) - o.driving.interpolate(k * h)) / std::sqrt(h));
  }
  const double mu = mean(inc), sd = std::sqrt(variance(inc));
  const KsResult ks = ks_test(inc, [&](double x) { return normal_cdf((x - mu) / sd); });
  rep.summary["increment_mean"] = mu;
  rep.summary["increment_sd"] = sd;
  rep.summary["ks_D"] = ks.D;
  rep.summary["ks_p"] = ks.p;
  rep.add_criterion(make_criterion(
      "interface-variance-low", "the welded seam is driven at speed kappa = 4 (variance slope not below the band)",
      slope, ">=", cfg.real("slope_min")));
  rep.add_criterion(make_criterion(
      "interface-variance-high", "the welded seam is driven at speed kappa = 4 (variance slope not above the band)",
      slope, "<=", cfg.real("slope_max")));
  rep.add_criterion(make_criterion("interface-gaussian-increments",
                                   "driving increments of the welded seam are Gaussian", ks.p, ">",
                                   cfg.real("p_threshold")));
  rep.notes.push_back("welds stop once the seam capacity reaches weld_capacity_factor times the capacity; seams "
                      "that exhaust the window first are excluded and counted in reached_fraction");
  return rep;
}

// ------------------------------------------------------------------ exp_zipper

Report run_zipper(const ExperimentConfig& cfg) {
  Report rep = start_report(cfg);
  const double eps = cfg.real("eps"), beta = cfg.real("beta"), t = cfg.real("length");
  const double per_unit = cfg.real("pairs_per_unit"), window = cfg.real("window");
  const auto svals = cfg.real_list("radii_s");
  const int J = dyadic_level(eps);
  const auto xs = standard_grid(static_cast<std::size_t>(cfg.integer("points")), -window, window);
  const NeumannSampler lateral(xs, level_range(0, J));
  const WedgeGridSpec grid = wedge_grid_for(J);
  struct Out {
    bool ok = false;
    std::string failure;
    std::vector<double> zipped, fresh;
  };
  const auto outs = replicate<Out>(cfg, [&](std::size_t i) {
    RngStream rng = replica_stream(cfg, 10, i);
    RngStream fresh_rng(cfg.seed, 10 * stream_block + stream_block / 2 + i);
    Out o;
    const Path f = sample_wedge_radial(2.0, 1.0, Parametrisation::last_exit, grid, fresh_rng);
    for (double s : svals) o.fresh.push_back(f.at(s));
    const WedgeSample w = sample_wedge(2.0, 1.0, Parametrisation::last_exit, grid, lateral, rng);
    try {
      const ZipResult z = zip_up(w.field, {}, t, eps, beta, per_unit);
      WedgeSample u;
      u.gamma = 2.0;
      u.alpha = 1.0;
      u.Q = 2.0;
      u.parametrisation = Parametrisation::unit_circle;
      u.embedding = Parametrisation::unit_circle;
      u.radial = radial_part(z.field);
      u.field = z.field;
      u.source_field = z.field;
      const WedgeSample c = reparametrise(u, Parametrisation::last_exit);
      for (double s : svals) o.zipped.push_back(c.radial.at(s));
      o.ok = true;
    } catch (const OutOfRange&) {
      o.failure = "out_of_range";
    } catch (const RangeExhausted&) {
      o.failure = "range_exhausted";
    }
    return o;
  });
  std::vector<std::vector<double>> zipped(svals.size()), fresh(svals.size());
  std::size_t ok = 0;
  for (const auto& o : outs) {
    Json r{{"zipped", o.ok}, {"fresh", to_json(o.fresh)}};
    if (!o.ok) r["failure"] = o.failure;
    if (o.ok) r["zipped_values"] = to_json(o.zipped);
    rep.records.push_back(r);
    for (std::size_t k = 0; k < svals.size(); ++k) {
      fresh[k].push_back(o.fresh[k]);
      if (o.ok) zipped[k].push_back(o.zipped[k]);
    }
    ok += o.ok;
  }
  rep.summary["zipped"] = ok;
  rep.summary["zipped_fraction"] = static_cast<double>(ok) / static_cast<double>(outs.size());
  for (std::size_t k = 0; k < svals.size(); ++k) {
    double p = 0.0, D = 1.0;
    if (zipped[k].size() >= 20) {
      const KsResult ks = ks_two_sample(zipped[k], fresh[k]);
      p = ks.p;
      D = ks.D;
      rep.summary["mean_zipped_s_" + num(svals[k])] = mean(zipped[k]);
    }
    rep.summary["mean_fresh_s_" + num(svals[k])] = mean(fresh[k]);
    rep.summary["ks_D_s_" + num(svals[k])] = D;
    rep.summary["ks_p_s_" + num(svals[k])] = p;
    rep.add_criterion(make_criterion(
        "zipper-stationarity-s" + num(svals[k]),
        "after zipping up and rescaling, the radial part at s = " + num(svals[k]) + " has the (2,1)-wedge law", p,
        ">", cfg.real("p_threshold")));
  }
  rep.notes.push_back("replicas whose zip-up or last-exit rescaling leaves the sampled window are excluded; "
                      "their count and reason are in the replica records");
  return rep;
}

}  // namespace

void register_welding_experiments(std::vector<Experiment>& out) {
  using K = ParamKind;
  out.push_back({"exp_weld",
                 "an independent SLE_4 cuts a (2,1)-quantum wedge into two sides of equal critical length",
                 100,
                 {{"scales", K::real_list, "0.015625,0.00390625,0.0009765625", "dyadic scales"},
                  {"capacity", K::real, "0.5", "capacity time of the curve"},
                  {"dt", K::real, "0.0001", "driving step"},
                  {"beta", K::real, "5", "truncation level"},
                  {"window", K::real, "4", "half-width of the boundary window"},
                  {"points", K::integer, "4096", "grid points"},
                  {"push_points", K::integer, "2048", "points on the pushed boundary"}},
                 run_weld});
  out.push_back({"exp_interface",
                 "welding two independent (2,2)-quantum wedges by critical length produces an SLE_4 interface",
                 300,
                 {{"eps", K::real, "0.0009765625", "dyadic scale"},
                  {"beta", K::real, "5", "truncation level"},
                  {"capacity", K::real, "0.01", "seam capacity at which welding stops"},
                  {"weld_capacity_factor", K::real, "4", "welds continue to this multiple of the capacity"},
                  {"max_length", K::real, "8", "largest welded quantum length"},
                  {"pairs_per_unit", K::real, "256", "correspondence resolution"},
                  {"min_pairs", K::integer, "256", "fewest welds per seam before the lattice is refined"},
                  {"window", K::real, "4", "half-width of the boundary window"},
                  {"points", K::integer, "8192", "grid points"},
                  {"time_points", K::integer, "8", "evaluation times"},
                  {"increments", K::integer, "4", "increments per seam"},
                  {"slope_min", K::real, "3", "lower end of the variance-slope band"},
                  {"slope_max", K::real, "5", "upper end of the variance-slope band"},
                  {"p_threshold", K::real, "0.01", "KS acceptance level"}},
                 run_interface});
  out.push_back({"exp_zipper",
                 "zipping up a (2,1)-quantum wedge by critical length leaves its law invariant",
                 500,
                 {{"eps", K::real, "0.0009765625", "dyadic scale"},
                  {"beta", K::real, "5", "truncation level"},
                  {"length", K::real, "0.5", "zipped quantum length"},
                  {"pairs_per_unit", K::real, "256", "correspondence resolution"},
                  {"window", K::real, "8", "half-width of the boundary window"},
                  {"points", K::integer, "16384", "grid points"},
                  {"radii_s", K::real_list, "0.5,1", "log-radii compared"},
                  {"p_threshold", K::real, "0.01", "KS acceptance level"}},
                 run_zipper});
}

}  // namespace weldlab::detail
