#include <doctest.h>

#include <cmath>
#include <sstream>

#include "weldlab/errors.hpp"
#include "weldlab/field.hpp"
#include "weldlab/stats.hpp"
#include "weldlab/wedges.hpp"

using namespace weldlab;

namespace {

// Midpoint rule for int_{2^-hi}^{1} (2/s)(1 - r/(L s))_+ ds, in log s.
double kernel_oracle(double r, int hi, double L) {
  const int n = 200000;
  const double a = std::log(std::ldexp(1.0, -hi)), b = 0.0, du = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = std::exp(a + (i + 0.5) * du);
    sum += 2.0 * std::max(0.0, 1.0 - r / (L * s)) * du;
  }
  return sum;
}

}  // namespace

TEST_CASE("covariance kernel matches its integral form") {
  CovarianceSpec cov;
  for (double r : {0.0, 0.001, 0.01, 0.1, 0.37, 1.5})
    for (int j : {1, 4, 8}) CHECK(cov.covariance(r, j, j) == doctest::Approx(kernel_oracle(r, j, cov.support)).epsilon(1e-6));
  CHECK(cov.variance(10) == doctest::Approx(2.0 * std::log(1024.0)));
  // Far from the cutoff the kernel is -2 log r + 2 r / L.
  const double r = 0.5;
  CHECK(cov.covariance(r, 12, 12) == doctest::Approx(-2.0 * std::log(r) + 2.0 * r / cov.support));
  CovarianceSpec shifted;
  shifted.kappa0 = 0.7;
  CHECK(shifted.variance(5) == doctest::Approx(cov.variance(5) + 0.7));
  CHECK(CovarianceSpec::from_config(shifted.to_config()).kappa0 == 0.7);
}

TEST_CASE("neumann sampler has the kernel's variance and covariance") {
  const auto xs = standard_grid(512, -2.0, 2.0);
  for (double kappa0 : {0.0, 1.0}) {
    CovarianceSpec cov;
    cov.kappa0 = kappa0;
    const NeumannSampler sampler(xs, level_range(0, 8), cov);
    RngStream rng(21, 0);
    const std::size_t i = 256, j = 256 + 64;  // |x - y| = 0.5
    const std::size_t k = sampler.levels().size() - 1;
    std::vector<double> a, b, prod;
    const int n = 2000;
    for (int t = 0; t < n; ++t) {
      const BoundaryFieldGrid f = sampler.sample(rng);
      a.push_back(f.value(k, i));
      b.push_back(f.value(k, j));
    }
    const double var_oracle = 2.0 * 8.0 * std::log(2.0) + kappa0;
    CHECK(std::fabs(variance(a) - var_oracle) < 3.0 * var_oracle * std::sqrt(2.0 / (n - 1)));
    const double ma = mean(a), mb = mean(b);
    for (int t = 0; t < n; ++t) prod.push_back((a[t] - ma) * (b[t] - mb));
    const double r = xs[j] - xs[i];
    const double cov_oracle = -2.0 * std::log(r) + 2.0 * r / cov.support + kappa0;
    CHECK(std::fabs(mean(prod) - cov_oracle) < 3.0 * standard_error(prod));
  }
}

TEST_CASE("neumann field is a martingale in scale") {
  const auto xs = standard_grid(256, -2.0, 2.0);
  const NeumannSampler sampler(xs, level_range(0, 8));
  RngStream rng(22, 0);
  std::vector<double> coarse, fine;
  const std::size_t i = 100;
  for (int t = 0; t < 3000; ++t) {
    const BoundaryFieldGrid f = sampler.sample(rng);
    coarse.push_back(f.value(f.level_index(4), i));
    fine.push_back(f.value(f.level_index(8), i));
  }
  double c = 0.0;
  const double slope = regression_slope(coarse, fine, &c);
  // Residual variance is the variance of the layers 5..8: 8 log 2.
  const double se = std::sqrt(8.0 * std::log(2.0) / (3000.0 * variance(coarse)));
  CHECK(std::fabs(slope - 1.0) < 4.0 * se);
  CHECK(std::fabs(c) < 4.0 * std::sqrt(8.0 * std::log(2.0) / 3000.0) + 4.0 * se * std::fabs(mean(coarse)));
}

TEST_CASE("sample_field validates scales") {
  RngStream rng(23, 0);
  const auto xs = standard_grid(64, -1.0, 1.0);
  CHECK_THROWS_AS(sample_field(xs, {0.5, 0.3}, {}, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_field(xs, {0.5, 0.125}, {}, rng), InvalidArgument);
  const BoundaryFieldGrid f = sample_field(xs, {1.0, 0.5, 0.25}, {}, rng);
  CHECK(f.num_scales() == 3);
  CHECK(f.has_scale(0.25));
  CHECK_THROWS_AS(f.scale_index(0.125), InvalidArgument);
}

TEST_CASE("radial part") {
  const auto xs = standard_grid(64, -1.0, 1.0);
  const auto levels = level_range(0, 4);
  std::vector<double> v;
  for (std::size_t k = 0; k < levels.size(); ++k)
    for (double x : xs) v.push_back(std::cos(3.0 * std::fabs(x)));
  const Path p = radial_part(BoundaryFieldGrid(xs, levels, v, "test"));
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.values[i] == doctest::Approx(std::cos(3.0 * std::exp(-p.times[i]))));

  const Path zero = radial_part(BoundaryFieldGrid(xs, levels, std::vector<double>(v.size(), 0.0), "zero"));
  for (double x : zero.values) CHECK(x == 0.0);

  auto shifted = xs;
  for (double& x : shifted) x += 0.01;
  CHECK_THROWS_AS(radial_part(BoundaryFieldGrid(shifted, levels, v, "test")), InvalidArgument);
}

TEST_CASE("wedge field carries its injected radial path") {
  const auto xs = standard_grid(512, -4.0, 4.0);
  const NeumannSampler lateral(xs, level_range(0, 8));
  WedgeGridSpec grid;
  RngStream rng(24, 0);
  const std::vector<double> ss{-1.0, 0.0, 1.0, 2.5};
  std::vector<std::vector<double>> diff(ss.size());
  for (int t = 0; t < 400; ++t) {
    const WedgeSample w = sample_wedge(2.0, 2.0, Parametrisation::last_exit, grid, lateral, rng);
    const Path p = radial_part(w.field);
    for (std::size_t k = 0; k < ss.size(); ++k) {
      // Grid radius nearest to e^{-s}; the radial path has a cusp at s = 0.
      std::size_t i = 0;
      for (std::size_t m = 1; m < p.size(); ++m)
        if (std::fabs(p.times[m] - ss[k]) < std::fabs(p.times[i] - ss[k])) i = m;
      diff[k].push_back(p.values[i] - w.radial.at(p.times[i]));
    }
  }
  for (const auto& d : diff) CHECK(std::fabs(mean(d)) < 3.0 * standard_error(d) + 1e-12);
}

TEST_CASE("add_constant and recentre") {
  const auto xs = standard_grid(64, -1.0, 1.0);
  RngStream rng(25, 0);
  const BoundaryFieldGrid f = sample_field(xs, {1.0, 0.5, 0.25, 0.125}, {}, rng);
  CHECK(add_constant(f, 0.0).values() == f.values());
  const BoundaryFieldGrid g = add_constant(f, 1.25);
  for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(g.values()[i] - f.values()[i] == doctest::Approx(1.25));

  const double h = xs[1] - xs[0];
  const BoundaryFieldGrid r = recentre(recentre(f, 5 * h), -5 * h);
  CHECK(r.values() == f.values());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(r.xs()[i] == doctest::Approx(xs[i]).epsilon(1e-12));
  CHECK(recentre(f, 5 * h).xs()[10] == doctest::Approx(xs[10] - 5 * h));
  CHECK_THROWS_AS(recentre(f, 0.3 * h), InvalidArgument);
}

TEST_CASE("field snapshots are one record per point and scale") {
  const auto xs = standard_grid(8, -1.0, 1.0);
  RngStream rng(26, 0);
  const BoundaryFieldGrid f = sample_field(xs, {1.0, 0.5}, {}, rng);
  std::stringstream ss;
  f.write_ndjson(ss);
  int lines = 0;
  for (std::string line; std::getline(ss, line);) {
    CHECK(line.find("\"scale\"") != std::string::npos);
    ++lines;
  }
  CHECK(lines == 16);
}
