#include "weldlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "weldlab/errors.hpp"

namespace weldlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::subcritical: return "subcritical";
    case MeasureKind::critical: return "critical";
    case MeasureKind::truncated: return "truncated";
    case MeasureKind::transported: return "transported";
  }
  return "unknown";
}

BoundaryMeasure::BoundaryMeasure(std::vector<double> edges, std::vector<double> density,
                                 double scale, MeasureKind kind, double param)
    : edges_(std::move(edges)), density_(std::move(density)), scale_(scale), kind_(kind),
      param_(param) {
  require(edges_.size() == density_.size() + 1 && !density_.empty(),
          "BoundaryMeasure: need one more edge than cells");
  for (std::size_t i = 1; i < edges_.size(); ++i)
    require(edges_[i] > edges_[i - 1], "BoundaryMeasure: edges must be increasing");
  cum_.assign(edges_.size(), 0.0);
  for (std::size_t i = 0; i < density_.size(); ++i)
    cum_[i + 1] = cum_[i] + density_[i] * (edges_[i + 1] - edges_[i]);
}

double BoundaryMeasure::cumulative(double x) const {
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return cum_.back();
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin()) - 1;
  return cum_[i] + density_[i] * (x - edges_[i]);
}

double BoundaryMeasure::mass(double a, double b) const {
  if (b <= a) return 0.0;
  return cumulative(b) - cumulative(a);
}

bool BoundaryMeasure::is_nonnegative() const {
  return std::all_of(density_.begin(), density_.end(), [](double d) { return d >= 0.0; });
}

std::vector<std::size_t> BoundaryMeasure::negative_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < density_.size(); ++i)
    if (density_[i] < 0.0) out.push_back(i);
  return out;
}

void BoundaryMeasure::require_nonnegative(const char* op) const {
  if (kind_ == MeasureKind::critical || !is_nonnegative())
    throw InvalidArgument(std::string(op) + ": measure is signed");
}

double BoundaryMeasure::quantile(double q) const {
  require_nonnegative("quantile");
  if (q <= 0.0) return edges_.front();
  if (q > cum_.back()) throw OutOfRange("quantile: q exceeds total mass");
  const std::size_t i =
      static_cast<std::size_t>(std::lower_bound(cum_.begin(), cum_.end(), q) - cum_.begin());
  // cum_[i-1] < q <= cum_[i], so cell i-1 has positive density.
  const std::size_t c = i - 1;
  const double x = edges_[c] + (q - cum_[c]) / density_[c];
  return std::min(x, edges_[i]);
}

double BoundaryMeasure::upper_quantile(double v) const {
  require_nonnegative("upper_quantile");
  if (v >= cum_.back()) return edges_.back();
  if (v < 0.0) throw OutOfRange("upper_quantile: negative level");
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), v) - cum_.begin());
  // cum_[i-1] <= v < cum_[i].
  const std::size_t c = i - 1;
  const double x = edges_[c] + (v - cum_[c]) / density_[c];
  return std::max(x, edges_[c]);
}

void BoundaryMeasure::write_csv(std::ostream& os) const {
  os << "cell_left,cell_right,density\n";
  for (std::size_t i = 0; i < density_.size(); ++i)
    os << fmt(edges_[i]) << ',' << fmt(edges_[i + 1]) << ',' << fmt(density_[i]) << '\n';
}

void BoundaryMeasure::write_cumulative_csv(std::ostream& os) const {
  os << "x,F\n";
  for (std::size_t i = 0; i < edges_.size(); ++i) os << fmt(edges_[i]) << ',' << fmt(cum_[i]) << '\n';
}

std::vector<double> cell_edges(const std::vector<double>& xs) {
  require(xs.size() >= 2, "cell_edges: need >= 2 points");
  std::vector<double> e(xs.size() + 1);
  e[0] = xs[0] - 0.5 * (xs[1] - xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) e[i] = 0.5 * (xs[i - 1] + xs[i]);
  e.back() = xs.back() + 0.5 * (xs.back() - xs[xs.size() - 2]);
  return e;
}

BoundaryMeasure subcritical_measure(const BoundaryFieldGrid& field, double gamma, double eps) {
  require(gamma > 0.0 && gamma < 2.0, "subcritical_measure: gamma must lie in (0, 2)");
  const std::size_t k = field.scale_index(eps);
  const double norm = std::pow(eps, gamma * gamma / 4.0);
  std::vector<double> d(field.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::exp(0.5 * gamma * field.value(k, i)) * norm;
  return BoundaryMeasure(cell_edges(field.xs()), std::move(d), eps, MeasureKind::subcritical, gamma);
}

BoundaryMeasure critical_measure(const BoundaryFieldGrid& field, double eps) {
  const std::size_t k = field.scale_index(eps);
  const double L = std::log(1.0 / eps);
  std::vector<double> d(field.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double h = field.value(k, i);
    d[i] = (-0.5 * h + L) * std::exp(h) * eps;
  }
  return BoundaryMeasure(cell_edges(field.xs()), std::move(d), eps, MeasureKind::critical);
}

std::vector<bool> truncation_indicator(const BoundaryFieldGrid& field, double beta, double eps) {
  const std::size_t k = field.scale_index(eps);
  if (field.levels().front() != 0)
    throw InvalidArgument("truncated measure needs every dyadic scale in [eps, 1]");
  std::vector<bool> pass(field.size(), true);
  for (std::size_t l = 0; l <= k; ++l) {
    const double bound = std::log(1.0 / field.scale(l)) + beta;
    for (std::size_t i = 0; i < field.size(); ++i)
      if (!(0.5 * field.value(l, i) < bound)) pass[i] = false;
  }
  return pass;
}

BoundaryMeasure truncated_derivative_measure(const BoundaryFieldGrid& field, double beta, double eps) {
  require(beta > 0.0, "truncated_derivative_measure: beta must be positive");
  const auto pass = truncation_indicator(field, beta, eps);
  const std::size_t k = field.scale_index(eps);
  const double L = std::log(1.0 / eps);
  std::vector<double> d(field.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!pass[i]) continue;
    const double h = field.value(k, i);
    d[i] = (-0.5 * h + L + beta) * std::exp(h) * eps;
  }
  return BoundaryMeasure(cell_edges(field.xs()), std::move(d), eps, MeasureKind::truncated, beta);
}

BoundaryMeasure normalized_subcritical(const BoundaryFieldGrid& field, double gamma, double eps) {
  if (gamma == 2.0) throw InvalidArgument("normalized_subcritical: gamma = 2 has no normalization");
  BoundaryMeasure m = subcritical_measure(field, gamma, eps);
  std::vector<double> d = m.density();
  for (double& x : d) x /= (4.0 - 2.0 * gamma);
  return BoundaryMeasure(m.edges(), std::move(d), eps, MeasureKind::subcritical, gamma);
}

std::pair<double, double> quantum_points(const BoundaryMeasure& m, double q) {
  require(q >= 0.0, "quantum_points: q must be non-negative");
  if (q == 0.0) return {0.0, 0.0};
  const double F0 = m.cumulative(0.0);
  if (q > m.total() - F0 || q > F0) throw OutOfRange("quantum_points: one-sided mass below q");
  const double x = m.quantile(F0 + q);
  const double y = m.upper_quantile(F0 - q);
  return {std::max(x, 0.0), std::min(y, 0.0)};
}

BoundaryMeasure transport(const BoundaryMeasure& m, const std::vector<double>& new_edges,
                          const std::function<double(double)>& psi) {
  require(new_edges.size() >= 2, "transport: need >= 2 edges");
  std::vector<double> F(new_edges.size());
  for (std::size_t i = 0; i < F.size(); ++i) F[i] = m.cumulative(psi(new_edges[i]));
  std::vector<double> d(new_edges.size() - 1);
  for (std::size_t i = 0; i < d.size(); ++i) {
    require(F[i + 1] >= F[i] || m.kind() == MeasureKind::critical, "transport: map must be increasing");
    d[i] = (F[i + 1] - F[i]) / (new_edges[i + 1] - new_edges[i]);
  }
  return BoundaryMeasure(new_edges, std::move(d), m.scale(), MeasureKind::transported, m.param());
}

}  // namespace weldlab
