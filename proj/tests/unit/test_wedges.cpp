#include <doctest.h>

#include <cmath>
#include <limits>

#include "weldlab/errors.hpp"
#include "weldlab/field.hpp"
#include "weldlab/stats.hpp"
#include "weldlab/wedges.hpp"

using namespace weldlab;

namespace {

const NeumannSampler& small_lateral() {
  static const NeumannSampler s(standard_grid(128, -4.0, 4.0), level_range(0, 5));
  return s;
}

}  // namespace

TEST_CASE("Q at criticality and parameter checks") {
  CHECK(q_gamma(2.0) == 2.0);
  CHECK(q_gamma(1.0) == 2.5);
  RngStream rng(41, 0);
  WedgeGridSpec grid;
  CHECK_THROWS_AS(sample_wedge_radial(1.5, q_gamma(1.5), Parametrisation::last_exit, grid, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_wedge_radial(2.0, 2.5, Parametrisation::last_exit, grid, rng), InvalidArgument);
  CHECK_NOTHROW(sample_wedge_radial(2.0, 2.0, Parametrisation::last_exit, grid, rng));
  CHECK(parse_parametrisation(to_string(Parametrisation::unit_circle)) == Parametrisation::unit_circle);
}

TEST_CASE("every sampler output satisfies its parametrisation invariant") {
  RngStream rng(42, 0);
  WedgeGridSpec grid;
  const std::vector<std::pair<double, double>> params{{2.0, 2.0}, {2.0, 1.0}, {1.5, 1.5}, {1.5, 1.5 - 2.0 / 1.5}};
  for (auto [g, a] : params)
    for (auto p : {Parametrisation::last_exit, Parametrisation::unit_circle, Parametrisation::strip})
      for (int t = 0; t < 5; ++t) {
        const WedgeSample w = sample_wedge(g, a, p, grid, small_lateral(), rng);
        CHECK(w.Q == q_gamma(g));
        CHECK_NOTHROW(check_invariants(w));
      }
}

TEST_CASE("critical last-exit radial part stays below the slope-2 line") {
  RngStream rng(43, 0);
  WedgeGridSpec grid;
  for (int t = 0; t < 100; ++t) {
    const Path r = sample_wedge_radial(2.0, 2.0, Parametrisation::last_exit, grid, rng);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.times[i] == 0.0) CHECK(r.values[i] == 0.0);
      else if (r.times[i] > 0.0) REQUIRE(r.values[i] - 2.0 * r.times[i] < 0.0);
    }
  }
}

TEST_CASE("critical unit-circle radial part is B_2s + 2s after s = 0") {
  RngStream rng(44, 0);
  WedgeGridSpec grid;
  const double ds = 0.5;
  std::vector<double> inc;
  for (int t = 0; t < 4000; ++t) {
    const Path r = sample_wedge_radial(2.0, 2.0, Parametrisation::unit_circle, grid, rng);
    inc.push_back(r.at(1.0 + ds) - r.at(1.0));
  }
  CHECK(std::fabs(mean(inc) - 2.0 * ds) < 3.0 * standard_error(inc));
  const double v = 2.0 * ds;
  CHECK(std::fabs(variance(inc) - v) < 3.0 * v * std::sqrt(2.0 / (inc.size() - 1)));
}

TEST_CASE("reparametrise") {
  RngStream rng(45, 0);
  WedgeGridSpec grid;
  grid.s_max = 40.0;  // room for the shift to the last exit
  const WedgeSample w = sample_wedge(2.0, 1.0, Parametrisation::last_exit, grid, small_lateral(), rng);
  const WedgeSample same = reparametrise(w, Parametrisation::last_exit);
  CHECK(same.radial.values == w.radial.values);
  CHECK(same.field.values() == w.field.values());

  // Unit-circle samples moved to their last exit agree in law with the direct sampler.
  const std::vector<double> ss{0.5, 1.0, 2.0};
  std::vector<std::vector<double>> direct(ss.size()), moved(ss.size());
  std::size_t exhausted = 0;
  for (int t = 0; t < 2000; ++t) {
    const Path d = sample_wedge_radial(2.0, 1.0, Parametrisation::last_exit, grid, rng);
    for (std::size_t k = 0; k < ss.size(); ++k) direct[k].push_back(d.at(ss[k]));
    WedgeSample u;
    u.gamma = 2.0;
    u.alpha = 1.0;
    u.Q = 2.0;
    u.parametrisation = u.embedding = Parametrisation::unit_circle;
    u.radial = sample_wedge_radial(2.0, 1.0, Parametrisation::unit_circle, grid, rng);
    u.field = u.source_field = BoundaryFieldGrid(standard_grid(4, -1.0, 1.0), {0}, std::vector<double>(4, 0.0), "flat");
    try {
      const WedgeSample m = reparametrise(u, Parametrisation::last_exit);
      CHECK_NOTHROW(check_invariants(m));
      std::vector<double> v;
      for (double x : ss) v.push_back(m.radial.at(x));
      for (std::size_t k = 0; k < ss.size(); ++k) moved[k].push_back(v[k]);
    } catch (const RangeExhausted&) {
      ++exhausted;
    } catch (const OutOfRange&) {
      ++exhausted;
    }
  }
  CHECK(exhausted < 5);
  for (std::size_t k = 0; k < ss.size(); ++k) CHECK(ks_two_sample(direct[k], moved[k]).p > 0.01);
}

TEST_CASE("reparametrise preserves boundary lengths") {
  RngStream rng(46, 0);
  WedgeGridSpec grid;
  const double eps = 1.0 / 32.0, beta = 5.0;
  int checked = 0;
  for (int t = 0; t < 20 && checked < 5; ++t) {
    const WedgeSample w = sample_wedge(2.0, 1.0, Parametrisation::unit_circle, grid, small_lateral(), rng);
    WedgeSample m;
    try {
      m = reparametrise(w, Parametrisation::last_exit);
    } catch (const RangeExhausted&) {
      continue;
    }
    const BoundaryMeasure before = wedge_measure(w, beta, eps);
    const BoundaryMeasure after = wedge_measure(m, beta, eps);
    const double r = m.source_scale / w.source_scale;
    const double b = 0.5 * m.field.xs().back();
    for (double x : {0.25 * b, b}) {
      const double want = before.mass(0.0, r * x);
      CHECK(after.mass(0.0, x) == doctest::Approx(want).epsilon(1e-3));
      CHECK(after.mass(-x, 0.0) == doctest::Approx(before.mass(-r * x, 0.0)).epsilon(1e-3));
    }
    ++checked;
  }
  CHECK(checked == 5);
}

TEST_CASE("strip and half-plane descriptions") {
  RngStream rng(47, 0);
  WedgeGridSpec grid;
  const WedgeSample h = sample_wedge(2.0, 2.0, Parametrisation::last_exit, grid, small_lateral(), rng);
  const WedgeSample s = strip_halfplane_change(h, StripDirection::to_strip);
  CHECK(s.parametrisation == Parametrisation::strip);
  REQUIRE(s.strip.has_value());
  for (std::size_t i = 0; i < s.radial.size(); ++i) {
    CHECK(s.radial.values[i] == doctest::Approx(h.radial.values[i] - 2.0 * h.radial.times[i]));
    if (h.radial.times[i] == 0.0) CHECK(s.radial.values[i] == h.radial.values[i]);
  }
  const WedgeSample back = strip_halfplane_change(s, StripDirection::to_halfplane);
  for (std::size_t i = 0; i < h.field.values().size(); ++i)
    CHECK(back.field.values()[i] == doctest::Approx(h.field.values()[i]).epsilon(1e-6));
  const WedgeSample again = strip_halfplane_change(back, StripDirection::to_strip);
  for (std::size_t i = 0; i < s.strip->bottom.size(); ++i) {
    CHECK(std::fabs(again.strip->bottom[i] - s.strip->bottom[i]) < 1e-6);
    CHECK(std::fabs(again.strip->top[i] - s.strip->top[i]) < 1e-6);
  }
  CHECK_THROWS_AS(strip_halfplane_change(s, StripDirection::to_strip), InvalidArgument);
}

TEST_CASE("zoom_scale") {
  const double eps = 1.0 / 64.0, beta = 5.0, L = std::log(1.0 / eps);
  // Constant field with unit truncated density: (L + beta - c/2) e^c eps = 1.
  double lo = -20.0, hi = 8.0;
  for (int k = 0; k < 200; ++k) {
    const double c = 0.5 * (lo + hi);
    ((L + beta - 0.5 * c) * std::exp(c) * eps < 1.0 ? lo : hi) = c;
  }
  const auto xs = standard_grid(256, -2.0, 2.0);
  const auto levels = level_range(0, 6);
  const BoundaryFieldGrid canonical(xs, levels, std::vector<double>(xs.size() * levels.size(), lo), "constant");
  const ZoomResult same = zoom_scale(canonical, 0.0, beta, eps);
  CHECK(same.r == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(same.field.xs() == xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(same.field.value(6, i) == doctest::Approx(lo).epsilon(1e-9));

  const NeumannSampler sampler(standard_grid(512, -4.0, 4.0), level_range(0, 6));
  RngStream rng(48, 0);
  const std::vector<double> Cs{1.0, 2.0, 4.0, 8.0};
  std::vector<std::vector<double>> rs(Cs.size());
  for (int t = 0; t < 200; ++t) {
    const BoundaryFieldGrid f = sampler.sample(rng);
    for (std::size_t k = 0; k < Cs.size(); ++k) {
      try {
        const ZoomResult z = zoom_scale(f, Cs[k], beta, eps);
        CHECK(z.measure.mass(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
        rs[k].push_back(z.r);
      } catch (const RangeExhausted&) {
        rs[k].push_back(std::numeric_limits<double>::infinity());
      }
    }
  }
  for (std::size_t k = 0; k + 1 < Cs.size(); ++k) CHECK(median(rs[k + 1]) < median(rs[k]));
}
