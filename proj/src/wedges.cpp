#include "weldlab/wedges.hpp"

#include <cmath>
#include <cstdio>

#include "weldlab/errors.hpp"
#include "weldlab/welding.hpp"

namespace weldlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Joins a path in u = -s (s <= 0) and a path in s >= 0 sharing the value at 0.
Path join_sides(const Path& neg_in_u, const Path& pos, double neg_sign) {
  Path p;
  for (std::size_t i = neg_in_u.size(); i-- > 1;) {
    p.times.push_back(-neg_in_u.times[i]);
    p.values.push_back(neg_sign * neg_in_u.values[i]);
  }
  p.times.insert(p.times.end(), pos.times.begin(), pos.times.end());
  p.values.insert(p.values.end(), pos.values.begin(), pos.values.end());
  return p;
}

std::vector<double> side_grid(double extent, double ds) {
  const std::size_t n = static_cast<std::size_t>(std::llround(extent / ds));
  require(n >= 1, "wedge grid: side shorter than one step");
  return uniform_grid(0.0, ds * static_cast<double>(n), n);
}

void check_parameters(double gamma, double alpha) {
  require(gamma > 0.0 && gamma <= 2.0, "wedge: gamma must lie in (0, 2]");
  const double Q = q_gamma(gamma);
  if (!(alpha < Q || (gamma == 2.0 && alpha == 2.0)))
    throw InvalidArgument("wedge: alpha must be below Q_gamma (or (gamma, alpha) = (2, 2))");
}

}  // namespace

std::string to_string(Parametrisation p) {
  switch (p) {
    case Parametrisation::last_exit: return "last-exit";
    case Parametrisation::unit_circle: return "unit-circle";
    case Parametrisation::strip: return "strip";
  }
  return "unknown";
}

Parametrisation parse_parametrisation(const std::string& s) {
  if (s == "last-exit" || s == "last_exit") return Parametrisation::last_exit;
  if (s == "unit-circle" || s == "unit_circle") return Parametrisation::unit_circle;
  if (s == "strip") return Parametrisation::strip;
  throw InvalidArgument("unknown parametrisation '" + s + "'");
}

double q_gamma(double gamma) { return 2.0 / gamma + gamma / 2.0; }

Path sample_wedge_radial(double gamma, double alpha, Parametrisation p, const WedgeGridSpec& grid,
                         RngStream& rng) {
  check_parameters(gamma, alpha);
  require(grid.s_min < 0.0 && grid.s_max > 0.0 && grid.ds > 0.0, "wedge grid must straddle s = 0");
  const double Q = q_gamma(gamma);
  const auto pos = side_grid(grid.s_max, grid.ds);
  const auto neg = side_grid(-grid.s_min, grid.ds);
  Path radial;
  if (p == Parametrisation::unit_circle) {
    const Path right = sample_bm(pos, alpha, 2.0, 0.0, rng);
    // Qu - X_u with X conditioned positive; the radial value at s = -u is X_u - Qu.
    const Path left = sample_conditioned_below_line(neg, alpha, Q, 2.0, rng);
    radial = join_sides(left, right, -1.0);
  } else {
    const Path right = sample_conditioned_below_line(pos, alpha, Q, 2.0, rng);
    const Path left = sample_bm(neg, -alpha, 2.0, 0.0, rng);
    radial = join_sides(left, right, 1.0);
  }
  if (p == Parametrisation::strip)
    for (std::size_t i = 0; i < radial.size(); ++i) radial.values[i] -= Q * radial.times[i];
  radial.label = "wedge_radial";
  radial.params = {{"gamma", gamma}, {"alpha", alpha}, {"Q", Q}};
  radial.seed = rng.seed();
  radial.stream_id = rng.stream_id();
  return radial;
}

WedgeSample sample_wedge(double gamma, double alpha, Parametrisation p, const WedgeGridSpec& grid,
                         const NeumannSampler& lateral, RngStream& rng) {
  WedgeSample w;
  w.gamma = gamma;
  w.alpha = alpha;
  w.Q = q_gamma(gamma);
  w.parametrisation = p;
  w.embedding = p == Parametrisation::unit_circle ? Parametrisation::unit_circle : Parametrisation::last_exit;
  w.radial = sample_wedge_radial(gamma, alpha, p, grid, rng);
  Path halfplane = w.radial;
  if (p == Parametrisation::strip)
    for (std::size_t i = 0; i < halfplane.size(); ++i) halfplane.values[i] += w.Q * halfplane.times[i];
  const BoundaryFieldGrid neumann = lateral.sample(rng);
  w.field = assemble_wedge_field(
      neumann, halfplane, "wedge(" + fmt(gamma) + "," + fmt(alpha) + "," + to_string(w.embedding) + ")");
  w.source_field = w.field;
  if (p == Parametrisation::strip) {
    WedgeSample h = w;
    h.parametrisation = w.embedding;
    h.radial = halfplane;
    return strip_halfplane_change(h, StripDirection::to_strip);
  }
  return w;
}

void check_invariants(const WedgeSample& w) {
  if (w.Q != q_gamma(w.gamma)) throw NumericFailure("wedge invariant: Q != 2/gamma + gamma/2");
  const auto& ts = w.radial.times;
  const auto& vs = w.radial.values;
  const bool strip = w.parametrisation == Parametrisation::strip;
  const Parametrisation mode = strip ? w.embedding : w.parametrisation;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double excess = strip ? vs[i] : vs[i] - w.Q * ts[i];
    if (ts[i] == 0.0) {
      if (std::fabs(excess) > w.crossing_slack)
        throw NumericFailure("wedge invariant: radial part does not cross the Q-line at s = 0");
    } else if (mode == Parametrisation::last_exit && ts[i] > 0.0 && !(excess < 0.0)) {
      throw NumericFailure("wedge invariant: last-exit radial part meets the Q-line after s = 0");
    } else if (mode == Parametrisation::unit_circle && ts[i] < 0.0 && !(excess > 0.0)) {
      throw NumericFailure("wedge invariant: unit-circle radial part meets the Q-line before s = 0");
    }
  }
}

WedgeSample reparametrise(const WedgeSample& w, Parametrisation target) {
  if (target == w.parametrisation) return w;
  if (w.parametrisation == Parametrisation::strip)
    return reparametrise(strip_halfplane_change(w, StripDirection::to_halfplane), target);
  if (target == Parametrisation::strip) {
    WedgeSample h = w;
    return strip_halfplane_change(h, StripDirection::to_strip);
  }
  const auto& ts = w.radial.times;
  const auto& vs = w.radial.values;
  auto excess = [&](std::size_t i) { return vs[i] - w.Q * ts[i]; };
  std::size_t anchor = 0;
  if (target == Parametrisation::unit_circle) {
    // First grid time at which the strip radial part is negative; shift to the point before it.
    if (excess(0) < 0.0) throw RangeExhausted("reparametrise: first crossing precedes the grid");
    std::size_t i = 0;
    while (i < ts.size() && !(excess(i) < 0.0)) ++i;
    if (i == ts.size()) throw RangeExhausted("reparametrise: no crossing inside the grid");
    anchor = i - 1;
  } else {
    if (!(excess(ts.size() - 1) < 0.0)) throw RangeExhausted("reparametrise: last crossing beyond the grid");
    std::size_t i = ts.size() - 1;
    while (i > 0 && excess(i) < 0.0) --i;
    if (excess(i) < 0.0) throw RangeExhausted("reparametrise: no crossing inside the grid");
    anchor = i;
  }
  const double a = ts[anchor];
  WedgeSample out = w;
  out.parametrisation = target;
  out.embedding = target;
  out.crossing_slack = std::fabs(excess(anchor) - w.Q * 0.0);
  // h_new(y) = h(e^{-a} y) - Q a, so h_new,rad(e^{-s}) = h_rad(e^{-(s+a)}) - Q a.
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.radial.times[i] = ts[i] - a;
    out.radial.values[i] = vs[i] - w.Q * a;
  }
  out.radial.times[anchor] = 0.0;
  const double r = std::exp(-a);
  const auto& xs = w.field.xs();
  const double half = std::min(xs.back(), xs.back() / r);
  const auto grid = standard_grid(xs.size(), -half, half);
  out.field = push_field(w.field, scaling_map(r), w.Q, grid);
  out.source_scale = w.source_scale * r;
  out.strip.reset();
  return out;
}

WedgeSample strip_halfplane_change(const WedgeSample& w, StripDirection direction) {
  WedgeSample out = w;
  if (direction == StripDirection::to_strip) {
    require(w.parametrisation != Parametrisation::strip, "strip_halfplane_change: already in the strip");
    out.embedding = w.parametrisation;
    out.parametrisation = Parametrisation::strip;
    for (std::size_t i = 0; i < out.radial.size(); ++i) out.radial.values[i] -= w.Q * out.radial.times[i];
    if (w.field.is_symmetric()) {
      StripField sf;
      const auto& xs = w.field.xs();
      const std::size_t n = xs.size();
      sf.levels = w.field.levels();
      for (std::size_t i = n; i-- > 0 && xs[i] > 0.0;) sf.s.push_back(-std::log(xs[i]));
      const std::size_t m = sf.s.size();
      sf.bottom.resize(m * sf.levels.size());
      sf.top.resize(m * sf.levels.size());
      for (std::size_t k = 0; k < sf.levels.size(); ++k)
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t i = n - 1 - j;
          sf.bottom[k * m + j] = w.field.value(k, i) - w.Q * sf.s[j];
          sf.top[k * m + j] = w.field.value(k, n - 1 - i) - w.Q * sf.s[j];
        }
      out.strip = std::move(sf);
    }
  } else {
    require(w.parametrisation == Parametrisation::strip, "strip_halfplane_change: not in the strip");
    out.parametrisation = w.embedding;
    for (std::size_t i = 0; i < out.radial.size(); ++i) out.radial.values[i] += w.Q * out.radial.times[i];
    if (w.strip) {
      const StripField& sf = *w.strip;
      std::vector<double> values = w.field.values();
      const std::size_t n = w.field.size(), m = sf.s.size();
      for (std::size_t k = 0; k < sf.levels.size(); ++k)
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t i = n - 1 - j;
          values[k * n + i] = sf.bottom[k * m + j] + w.Q * sf.s[j];
          values[k * n + (n - 1 - i)] = sf.top[k * m + j] + w.Q * sf.s[j];
        }
      out.field = BoundaryFieldGrid(w.field.xs(), w.field.levels(), std::move(values), w.field.model());
    }
    out.strip.reset();
  }
  return out;
}

BoundaryMeasure wedge_measure(const WedgeSample& w, double beta, double eps) {
  const BoundaryMeasure source = truncated_derivative_measure(w.source_field, beta, eps);
  if (w.source_scale == 1.0 && w.field.xs() == w.source_field.xs()) return source;
  const double r = w.source_scale;
  return transport(source, cell_edges(w.field.xs()), [r](double y) { return r * y; });
}

ZoomResult zoom_scale(const BoundaryFieldGrid& field, double C, double beta, double eps) {
  const BoundaryFieldGrid shifted = add_constant(field, C);
  const BoundaryMeasure m = truncated_derivative_measure(shifted, beta, eps);
  const double F0 = m.cumulative(0.0);
  if (m.total() - F0 < 1.0) throw RangeExhausted("zoom_scale: less than unit mass to the right of 0");
  ZoomResult out;
  out.r = m.quantile(F0 + 1.0);
  if (std::fabs(out.r - 1.0) < 1e-12) out.r = 1.0;
  const auto& xs = field.xs();
  const std::size_t n = xs.size();
  double half = std::min(xs.back(), xs.back() / out.r);
  // Spacing 1/k puts cell edges at 0 and 1, so [0, 1] keeps its mass exactly.
  if (n % 2 == 0) half = static_cast<double>(n) / (2.0 * std::ceil(static_cast<double>(n) / (2.0 * half)));
  const auto grid = out.r == 1.0 ? xs : standard_grid(n, -half, half);
  out.field = push_field(shifted, scaling_map(out.r), 2.0, grid);
  const double r = out.r;
  out.measure = transport(m, cell_edges(grid), [r](double y) { return r * y; });
  return out;
}

}  // namespace weldlab
