#include <doctest.h>

#include <cmath>
#include <sstream>

#include "weldlab/errors.hpp"
#include "weldlab/field.hpp"
#include "weldlab/measures.hpp"
#include "weldlab/welding.hpp"

using namespace weldlab;

namespace {

constexpr cplx I(0.0, 1.0);

BoundaryMeasure uniform(double a, double b, std::size_t cells) {
  std::vector<double> edges;
  for (std::size_t i = 0; i <= cells; ++i) edges.push_back(a + (b - a) * i / cells);
  return BoundaryMeasure(edges, std::vector<double>(cells, 1.0), 1.0, MeasureKind::truncated, 1.0);
}

Correspondence from_pairs(const std::vector<std::pair<double, double>>& xy) {
  Correspondence c;
  double q = 0.0;
  for (auto [x, y] : xy) c.pairs.push_back({x, y, q += 0.1});
  return c;
}

const NeumannSampler& sampler() {
  static const NeumannSampler s(standard_grid(1024, -4.0, 4.0), level_range(0, 8));
  return s;
}

}  // namespace

TEST_CASE("quantum grid") {
  CHECK(quantum_grid(0.0).empty());
  const auto g = quantum_grid(1.0, 4.0);
  CHECK(g == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  const auto h = quantum_grid(0.6, 4.0);
  CHECK(h == std::vector<double>{0.25, 0.5, 0.6});
  CHECK_THROWS_AS(quantum_grid(-1.0), InvalidArgument);
  CHECK_THROWS_AS(quantum_grid(1.0, 0.0), InvalidArgument);
}

TEST_CASE("quantum correspondence") {
  const BoundaryMeasure u = uniform(-2.0, 2.0, 400);
  const auto qs = quantum_grid(1.5, 16.0);
  const Correspondence c = quantum_correspondence(u, u, qs);
  REQUIRE(c.pairs.size() == qs.size());
  for (std::size_t k = 0; k < qs.size(); ++k) {
    CHECK(c.pairs[k].x == doctest::Approx(qs[k]).epsilon(1e-12));
    CHECK(c.pairs[k].y == doctest::Approx(-qs[k]).epsilon(1e-12));
  }
  // A zero quantum time gives no pair.
  CHECK(quantum_correspondence(u, u, {0.0, 0.5}).pairs.size() == 1);
  CHECK_THROWS_AS(quantum_correspondence(u, u, {2.5}), OutOfRange);

  // Random densities: masses recomputed from the pairs equal q within one cell.
  RngStream rng(61, 0);
  std::vector<double> edges{-3.0}, dens;
  for (int i = 0; i < 600; ++i) {
    edges.push_back(edges.back() + 0.01);
    dens.push_back(std::exp(1.5 * rng.normal()));
  }
  const BoundaryMeasure m(edges, dens, 0.01, MeasureKind::truncated, 1.0);
  double biggest = 0.0;
  for (std::size_t i = 0; i < m.cells(); ++i) biggest = std::max(biggest, m.cell_mass(i));
  const double t = 0.9 * std::min(m.mass(0.0, 3.0), m.mass(-3.0, 0.0));
  const Correspondence r = quantum_correspondence(m, m, quantum_grid(t, 64.0));
  for (const auto& p : r.pairs) {
    CHECK(std::fabs(m.mass(0.0, p.x) - p.q) <= biggest);
    CHECK(std::fabs(m.mass(p.y, 0.0) - p.q) <= biggest);
  }

  const BoundaryMeasure signed_m({-1.0, 0.0, 1.0}, {1.0, -0.5}, 1.0, MeasureKind::critical);
  CHECK_THROWS_AS(quantum_correspondence(signed_m, signed_m, {0.1}), InvalidArgument);

  CHECK_THROWS_AS(from_pairs({{0.2, -0.2}, {0.1, -0.3}}).validate(), InvalidArgument);
  CHECK_THROWS_AS(from_pairs({{0.2, 0.2}}).validate(), InvalidArgument);
  CHECK_NOTHROW(from_pairs({{0.1, -0.2}, {0.2, -0.3}}).validate());

  std::stringstream ss;
  from_pairs({{0.1, -0.2}}).write_csv(ss);
  CHECK(ss.str().find("x,y,q") != std::string::npos);
}

TEST_CASE("elementary weld") {
  const SlitMap v = elementary_weld(0.7, 0.7);
  CHECK(std::fabs(v.tip().real()) < 1e-12);
  CHECK(v.tip().imag() > 0.0);
  for (auto [p, q] : {std::pair{0.7, 0.7}, std::pair{0.2, 1.5}, std::pair{3.0, 0.4}}) {
    const SlitMap s = elementary_weld(p, q);
    CHECK(std::abs(s(p)) < 1e-9);
    CHECK(std::abs(s(-q)) < 1e-9);
    CHECK(std::abs(s.tip()) == doctest::Approx(std::pow(p, p / (p + q)) * std::pow(q, q / (p + q))));
    CHECK(std::abs(s(0.0) - s.tip()) < 1e-12);
  }
  CHECK_THROWS_AS(elementary_weld(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(elementary_weld(1.0, -1.0), InvalidArgument);
}

TEST_CASE("welding curve from explicit correspondences") {
  std::vector<std::pair<double, double>> sym;
  for (int k = 1; k <= 50; ++k) sym.push_back({0.02 * k, -0.02 * k});
  const WeldedInterface a = build_welding_curve(from_pairs(sym));
  CHECK(a.curve.front() == cplx(0.0, 0.0));
  for (cplx z : a.curve) CHECK(std::fabs(z.real()) < 1e-6);
  for (std::size_t i = 1; i < a.curve.size(); ++i) CHECK(a.curve[i].imag() > a.curve[i - 1].imag());

  const WeldedInterface one = build_welding_curve(from_pairs({{0.3, -1.1}}));
  const SlitMap s = elementary_weld(0.3, 1.1);
  REQUIRE(one.curve.size() == 2);
  CHECK(std::abs(one.curve[1] - s.tip()) < 1e-12);
  CHECK(std::abs(one.map(cplx(0.5, 0.5)) - s(cplx(0.5, 0.5))) < 1e-12);

  CHECK_THROWS_AS(build_welding_curve(Correspondence{}), InvalidArgument);
  CHECK_THROWS_AS(build_welding_curve(from_pairs({{0.2, -0.2}, {0.1, -0.3}})), InvalidArgument);
}

TEST_CASE("welded interface bookkeeping") {
  RngStream rng(62, 0);
  std::vector<std::pair<double, double>> xy;
  double x = 0.0, y = 0.0;
  // Comparable steps on the two sides keep the slit angles away from the real axis,
  // where z^b with small b amplifies rounding without bound.
  for (int k = 0; k < 80; ++k) {
    x += 0.02 * (1.0 + 0.5 * rng.uniform());
    y -= 0.02 * (1.0 + 0.5 * rng.uniform());
    xy.push_back({x, y});
  }
  const Correspondence c = from_pairs(xy);
  const WeldedInterface w = build_welding_curve(c);

  // Matched points land on the same point of the seam.
  for (const auto& p : c.pairs) {
    const cplx zx = w.map(cplx(p.x, 0.0)), zy = w.map(cplx(p.y, 0.0));
    CHECK(std::abs(zx - zy) < 1e-6 * std::max(1.0, std::abs(zx)));
  }
  CHECK(std::abs(w.map(0.0) - w.curve.back()) < 1e-9);

  // Boundary action and its numerical inverse.
  for (double u : {x + 0.1, x + 2.0, y - 0.05, y - 3.0}) {
    const double v = w.map_real(u);
    const auto [back, D] = w.inverse_real(v);
    CHECK(back == doctest::Approx(u).epsilon(1e-9));
    const double h = 1e-6;
    const double fd = 2.0 * h / (w.map_real(u + h) - w.map_real(u - h));
    CHECK(D == doctest::Approx(fd).epsilon(1e-5));
  }
  for (cplx z : {cplx(0.1, 0.3), cplx(-2.0, 1.0), cplx(4.0, 0.01)})
    CHECK(std::abs(w.inverse(w.map(z)) - z) < 1e-9);

  // Capacity and shift add up along the composition; f(z) = z + shift + O(1/z).
  double cap = 0.0, shift = 0.0;
  for (const auto& s : w.maps) {
    cap += s.capacity_time();
    shift += s.shift();
  }
  const DrivingFunction d = w.driving();
  CHECK(d.horizon() == doctest::Approx(cap).epsilon(1e-12));
  CHECK(d.values.back() == doctest::Approx(shift).epsilon(1e-12));
  CHECK(w.total_shift == doctest::Approx(shift).epsilon(1e-12));
  const cplx far = I * 1e5;
  CHECK(std::abs(w.map(far) - far - w.total_shift) < 1e-3);

  // Mirror symmetry: negate the boundary and swap the sides.
  Correspondence mirror;
  for (const auto& p : c.pairs) mirror.pairs.push_back({-p.y, -p.x, p.q});
  const WeldedInterface m = build_welding_curve(mirror);
  REQUIRE(m.curve.size() == w.curve.size());
  for (std::size_t i = 0; i < w.curve.size(); ++i)
    CHECK(std::abs(m.curve[i] + std::conj(w.curve[i])) < 1e-12 * std::max(1.0, std::abs(w.curve[i])));
}

TEST_CASE("seams welded from truncated measures are simple") {
  const double eps = 1.0 / 256.0, beta = 5.0;
  RngStream rng(63, 0);
  int built = 0, simple = 0;
  for (int t = 0; t < 200; ++t) {
    const BoundaryMeasure m = truncated_derivative_measure(sampler().sample(rng), beta, eps);
    Correspondence c;
    try {
      c = quantum_correspondence(m, m, quantum_grid(0.25));
    } catch (const OutOfRange&) {
      continue;
    }
    const WeldedInterface w = build_welding_curve(c);
    ++built;
    if (w.simplicity_ratio() > 0.0) ++simple;
  }
  CHECK(built >= 150);
  CHECK(simple == built);
}

TEST_CASE("push_field") {
  RngStream rng(64, 0);
  const BoundaryFieldGrid f = sampler().sample(rng);
  const CoordinateMap id{[](double y) { return std::pair<cplx, double>(cplx(y, 0.0), 1.0); }};
  const BoundaryFieldGrid same = push_field(f, id, 2.0, f.xs());
  for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(same.values()[i] == doctest::Approx(f.values()[i]).epsilon(1e-12));

  const auto levels = level_range(0, 8);
  const BoundaryFieldGrid zero(f.xs(), levels, std::vector<double>(f.values().size(), 0.0), "zero");
  std::vector<double> inner;
  for (double x : f.xs()) inner.push_back(x / 3.0);
  const BoundaryFieldGrid scaled = push_field(zero, scaling_map(3.0), 2.0, inner);
  for (double v : scaled.values()) CHECK(v == doctest::Approx(2.0 * std::log(3.0)));
  CHECK_THROWS_AS(push_field(f, scaling_map(3.0), 2.0, f.xs()), InvalidArgument);
  CHECK_THROWS_AS(scaling_map(0.0), InvalidArgument);

  // Halving coordinates: nu_pushed at eps on A equals nu at 2 eps on 2A.
  std::vector<double> half;
  for (double x : f.xs()) half.push_back(0.5 * x);
  const double eps = 1.0 / 128.0, beta = 5.0;
  const BoundaryMeasure before = truncated_derivative_measure(f, beta, 2.0 * eps);
  const BoundaryMeasure after = truncated_derivative_measure(push_field(f, scaling_map(2.0), 2.0, half), beta, eps);
  const auto& e = after.edges();
  for (std::size_t a : {std::size_t{100}, std::size_t{400}, std::size_t{700}})
    for (std::size_t b : {a + 1, a + 37, a + 200}) {
      const double want = before.mass(2.0 * e[a], 2.0 * e[b]);
      if (want > 0.0) CHECK(after.mass(e[a], e[b]) == doctest::Approx(want).epsilon(1e-3));
    }
}

TEST_CASE("side lengths") {
  RngStream rng(65, 0);
  const BoundaryFieldGrid f = sampler().sample(rng);
  const DrivingFunction eta = sample_driving(4.0, 0.25, 1e-3, rng);
  const SideLengths none = side_lengths(f, eta, 0.0, 1.0 / 64.0);
  CHECK(none.left == 0.0);
  CHECK(none.right == 0.0);
  CHECK_THROWS_AS(side_lengths(f, eta, 1.0, 1.0 / 64.0), InvalidArgument);

  const auto ls = side_lengths(f, eta, 0.2, std::vector<double>{1.0 / 64.0, 1.0 / 128.0});
  for (const auto& s : ls) {
    CHECK(s.left > 0.0);
    CHECK(s.right > 0.0);
    CHECK(s.x_minus < 0.0);
    CHECK(s.x_plus > 0.0);
  }

  // A vertical slit in an even field has equal sides.
  std::vector<double> v(f.values().size());
  const std::size_t n = f.size();
  for (std::size_t k = 0; k < f.num_scales(); ++k)
    for (std::size_t i = 0; i < n; ++i) v[k * n + i] = 0.5 * (f.value(k, i) + f.value(k, n - 1 - i));
  const BoundaryFieldGrid even(f.xs(), f.levels(), v, "even");
  const SideLengths s = side_lengths(even, zero_driving(0.25, 1e-3), 0.25, 1.0 / 64.0);
  CHECK(s.x_plus == doctest::Approx(-s.x_minus).epsilon(1e-12));
  CHECK(s.left == doctest::Approx(s.right).epsilon(1e-3));
}

TEST_CASE("zip_up") {
  const double eps = 1.0 / 256.0, beta = 5.0;
  RngStream rng(66, 0);
  const BoundaryFieldGrid f = sampler().sample(rng);
  const std::vector<cplx> curve{0.0, cplx(0.0, 0.5), cplx(0.1, 1.0)};
  const ZipResult id = zip_up(f, curve, 0.0, eps, beta);
  CHECK(id.field.values() == f.values());
  CHECK(id.interface == curve);
  CHECK(id.correspondence.pairs.empty());
  CHECK_THROWS_AS(zip_up(f, curve, 1e6, eps, beta), OutOfRange);

  const BoundaryMeasure m = truncated_derivative_measure(f, beta, eps);
  const double t = 0.3;
  REQUIRE(std::min(m.mass(0.0, 4.0), m.mass(-4.0, 0.0)) > t);
  const ZipResult z = zip_up(f, curve, t, eps, beta, 128.0);
  CHECK(z.X > 0.0);
  CHECK(z.Y < 0.0);
  CHECK(m.mass(0.0, z.X) == doctest::Approx(t).epsilon(1e-9));
  CHECK(m.mass(z.Y, 0.0) == doctest::Approx(t).epsilon(1e-9));
  // Points beside the seam pull back next to the welded segment [Y, X].
  for (std::size_t i = 1; i + 1 < z.seam.curve.size(); ++i) {
    const cplx dir = z.seam.curve[i + 1] - z.seam.curve[i - 1];
    const cplx u = z.seam.inverse(z.seam.curve[i] + 1e-9 * I * dir / std::abs(dir));
    CHECK(std::fabs(u.imag()) < 1e-6);
    CHECK(u.real() >= z.Y - 1e-6);
    CHECK(u.real() <= z.X + 1e-6);
  }
  REQUIRE(z.interface.size() == z.seam.curve.size() + curve.size() - 1);
  CHECK(z.interface[z.seam.curve.size() - 1] == z.seam.curve.back());
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(std::abs(z.interface[z.seam.curve.size() - 1 + i] - z.seam.map(curve[i])) < 1e-12);
  CHECK(z.field.size() == f.size());
  CHECK(z.field.xs().front() == doctest::Approx(-z.field.xs().back()));
}
