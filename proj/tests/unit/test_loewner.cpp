#include <doctest.h>

#include <cmath>
#include <numbers>

#include "weldlab/errors.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/stats.hpp"

using namespace weldlab;

namespace {

constexpr cplx I(0.0, 1.0);

cplx sqrt_in_h(cplx w) {
  cplx r = std::sqrt(w);
  return r.imag() < 0.0 ? -r : r;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("sampled drivings") {
  RngStream rng(51, 0);
  const DrivingFunction zero = sample_driving(0.0, 1.0, 0.01, rng);
  for (double w : zero.values) CHECK(w == 0.0);
  std::vector<double> end;
  for (int i = 0; i < 10000; ++i) {
    const DrivingFunction d = sample_driving(3.0, 2.0, 0.05, rng);
    CHECK(d.values.front() == 0.0);
    end.push_back(d.values.back());
  }
  const double v = 3.0 * 2.0;
  CHECK(std::fabs(variance(end) - v) < 3.0 * v * std::sqrt(2.0 / (end.size() - 1)));
}

TEST_CASE("zero driving closed forms") {
  const LoewnerFlow fwd(zero_driving(1.0, 1e-3), FlowDirection::forward);
  const LoewnerFlow rev(zero_driving(1.0, 1e-3), FlowDirection::reverse);
  for (double t : {0.1, 0.5, 1.0})
    for (cplx z : {cplx(0.3, 0.2), cplx(-2.0, 0.01), cplx(5.0, 3.0), cplx(0.0, 4.0)}) {
      CHECK(rel(fwd.forward_map(t, z), sqrt_in_h(z * z + 4.0 * t)) < 1e-9);
      CHECK(rel(rev.reverse_map(t, z), sqrt_in_h(z * z - 4.0 * t)) < 1e-9);
    }
  for (double x : {2.5, -3.0, 7.0}) {
    const double want = std::copysign(std::sqrt(x * x - 4.0), x);
    CHECK(std::fabs(rev.reverse_map(1.0, x).real() - want) < 1e-9 * std::fabs(want));
    CHECK(std::fabs(rev.reverse_map(1.0, x).imag()) < 1e-12);
  }
  CHECK(rev.swallow_time(0.0) == 0.0);
  for (double x : {0.1, -0.7, 1.3, -1.9})
    CHECK(std::fabs(rev.swallow_time(x) - x * x / 4.0) < 1e-9 * x * x / 4.0);
  CHECK_THROWS_AS(fwd.forward_map(1.0, cplx(0.0, 1.0)), SwallowedPoint);
}

TEST_CASE("hydrodynamic normalisation and capacity additivity") {
  RngStream rng(52, 0);
  const double T = 1.0;
  const LoewnerFlow fwd(sample_driving(4.0, T, 1e-3, rng), FlowDirection::forward);
  const double R = 1e3;
  const cplx z = I * R;
  CHECK(std::abs(fwd.forward_map(T, z) - z - 2.0 * T / z) <= 10.0 / (R * R));
  CHECK(fwd.capacity(0.37) == 0.74);
  for (cplx w : {cplx(0.5, 0.5), cplx(-1.0, 0.2), cplx(3.0, 2.0)}) {
    const cplx direct = fwd.forward_map(0.8, w);
    const cplx composed = fwd.forward_between(0.3, 0.8, fwd.forward_map(0.3, w));
    CHECK(rel(composed, direct) < 1e-9);
  }
}

TEST_CASE("reverse flow lifts points") {
  RngStream rng(53, 0);
  const LoewnerFlow rev(sample_driving(4.0, 1.0, 1e-3, rng), FlowDirection::reverse);
  std::vector<double> mesh;
  for (int k = 0; k <= 100; ++k) mesh.push_back(0.01 * k);
  const std::vector<cplx> zs{cplx(0.0, 0.01), cplx(0.5, 0.1), cplx(-2.0, 1.0)};
  const auto traj = rev.reverse_trajectories(zs, mesh);
  for (std::size_t j = 0; j < zs.size(); ++j)
    for (std::size_t m = 1; m < mesh.size(); ++m)
      CHECK(traj[m * zs.size() + j].imag() >= traj[(m - 1) * zs.size() + j].imag());
  for (cplx w : {cplx(0.3, 0.4), cplx(-1.0, 2.0)})
    CHECK(rel(rev.reverse_map(0.7, rev.reverse_inverse(0.7, w)), w) < 1e-8);
}

TEST_CASE("inverse reverse flow has the law of the centred forward flow") {
  RngStream rng(54, 0);
  const double t = 0.5;
  const cplx z(0.0, 0.5);
  std::vector<double> re_f, im_f, re_g, im_g;
  for (int i = 0; i < 1500; ++i) {
    const LoewnerFlow rev(sample_driving(2.0, t, 2e-3, rng), FlowDirection::reverse);
    const cplx a = rev.reverse_inverse(t, z);
    re_f.push_back(a.real());
    im_f.push_back(a.imag());
    const LoewnerFlow fwd(sample_driving(2.0, t, 2e-3, rng), FlowDirection::forward);
    const cplx b = fwd.forward_map(t, z, true);
    re_g.push_back(b.real());
    im_g.push_back(b.imag());
  }
  CHECK(ks_two_sample(re_f, re_g).p > 0.01);
  CHECK(ks_two_sample(im_f, im_g).p > 0.01);
}

TEST_CASE("swallowing times increase with distance from the origin") {
  RngStream rng(55, 0);
  const LoewnerFlow rev(sample_driving(4.0, 4.0, 1e-3, rng), FlowDirection::reverse);
  std::vector<double> xs;
  for (int k = 1; k <= 60; ++k) xs.push_back(0.05 * k);
  // A jump of the piecewise-constant driving can pass several points at once, so
  // only ties are allowed beyond strict growth.
  double prev_r = 0.0, prev_l = 0.0;
  for (double x : xs) {
    const double r = rev.swallow_time(x), l = rev.swallow_time(-x);
    CHECK(r >= prev_r);
    CHECK(l >= prev_l);
    CHECK(r > 0.0);
    CHECK(l > 0.0);
    prev_r = r;
    prev_l = l;
  }
  CHECK(std::isfinite(rev.swallow_time(0.05)));
}

TEST_CASE("caratheodory+ distance") {
  RngStream rng(56, 0);
  const DrivingFunction a = sample_driving(4.0, 1.0, 1e-3, rng);
  const DrivingFunction b = sample_driving(3.0, 1.0, 1e-3, rng);
  const LoewnerFlow fa(a, FlowDirection::reverse), fb(b, FlowDirection::reverse);
  CaratheodoryMesh mesh;
  mesh.time_points = mesh.space_points = 16;
  mesh.swallow_points = 33;
  CHECK(caratheodory_plus_distance(fa, LoewnerFlow(a, FlowDirection::reverse), 1.0, 0.1, 1.0, mesh) == 0.0);
  const double ab = caratheodory_plus_distance(fa, fb, 1.0, 0.1, 1.0, mesh);
  CHECK(ab > 0.0);
  CHECK(ab == caratheodory_plus_distance(fb, fa, 1.0, 0.1, 1.0, mesh));
}

TEST_CASE("slit maps") {
  const SlitMap v{0.8, 0.8};
  CHECK(std::abs(v.tip() - cplx(0.0, 0.8)) < 1e-12);
  CHECK(std::abs(v(0.8)) < 1e-12);
  CHECK(std::abs(v(-0.8)) < 1e-12);
  CHECK(v.capacity_time() == doctest::Approx(0.16));

  const SlitMap s{0.3, 1.1};
  const double a = s.q / (s.p + s.q), b = s.p / (s.p + s.q);
  const cplx tip = std::pow(s.q, a) * std::pow(s.p, b) * std::exp(I * std::numbers::pi * b);
  CHECK(std::abs(s.tip() - tip) < 1e-12);
  CHECK(std::abs(s(-s.q)) < 1e-12);
  CHECK(std::abs(s(s.p)) < 1e-12);
  const cplx z(0.4, 0.7), h(1e-6, 0.0);
  CHECK(std::abs(s.derivative(z) - (s(z + h) - s(z - h)) / (2.0 * h)) < 1e-6);
  CHECK(std::abs(s.inverse(s(z)) - z) < 1e-10);
  CHECK(std::fabs(s.inverse_real(s(2.0).real()) - 2.0) < 1e-10);
  const SlitMap back = SlitMap::from_tip(s.tip());
  CHECK(back.p == doctest::Approx(s.p).epsilon(1e-9));
  CHECK(back.q == doctest::Approx(s.q).epsilon(1e-9));
  // Far away the map is z + (q - p) - pq / (2z).
  const cplx w(0.0, 1e4);
  CHECK(std::abs(s(w) - (w + s.shift() - s.p * s.q / (2.0 * w))) < 1e-6);
}

TEST_CASE("driving extraction") {
  std::vector<cplx> vertical;
  for (int k = 0; k <= 200; ++k) vertical.push_back(I * (0.01 * k));
  const DrivingFunction dv = extract_driving(vertical);
  for (double w : dv.values) CHECK(std::fabs(w) < 1e-6);
  CHECK(dv.horizon() == doctest::Approx(1.0).epsilon(1e-6));  // height 2 has capacity time 2^2 / 4

  // Straight ray at angle pi alpha: W_t = c sqrt(t) with c = 2 (1 - 2 alpha) / sqrt(alpha (1 - alpha)).
  for (double alpha : {0.3, 0.45, 0.6}) {
    std::vector<cplx> ray;
    const cplx dir = std::exp(I * std::numbers::pi * alpha);
    for (int k = 0; k <= 2000; ++k) ray.push_back(dir * (0.001 * k));
    const DrivingFunction d = extract_driving(ray);
    std::vector<double> rt, w;
    for (std::size_t k = d.steps() / 4; k < d.times.size(); ++k) {
      rt.push_back(std::sqrt(d.times[k]));
      w.push_back(d.values[k]);
    }
    const double c = regression_slope(rt, w);
    const double want = 2.0 * (1.0 - 2.0 * alpha) / std::sqrt(alpha * (1.0 - alpha));
    CHECK(std::fabs(c - want) <= 0.01 * std::fabs(want));
  }

  std::vector<cplx> bad{0.0, cplx(0.0, 1.0), cplx(1.0, 1.0), cplx(0.5, 2.0), cplx(0.5, 0.5)};
  CHECK_THROWS_AS(extract_driving(bad), InvalidCurve);
  CHECK_THROWS_AS(validate_curve({0.0, cplx(1.0, 0.0)}), InvalidCurve);
}

TEST_CASE("trace and re-extraction round trip") {
  // Straight segments between discrete tips may cross; such traces are rejected.
  const double dt = 1e-3;
  int valid = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(57, seed);
    const DrivingFunction w = sample_driving(3.0, 0.5, dt, rng);
    const auto curve = LoewnerFlow(w, FlowDirection::forward).trace();
    DrivingFunction back;
    try {
      back = extract_driving(curve);
    } catch (const InvalidCurve&) {
      continue;
    }
    ++valid;
    REQUIRE(back.times.size() == w.times.size());
    double worst = 0.0;
    for (std::size_t k = 1; k < w.times.size(); ++k)
      worst = std::max(worst, std::fabs(back.values[k] - w.values[k - 1]));
    CHECK(worst <= 5.0 * std::sqrt(dt));
    CHECK(back.horizon() == doctest::Approx(w.horizon()).epsilon(0.01));
  }
  CHECK(valid >= 7);
}
