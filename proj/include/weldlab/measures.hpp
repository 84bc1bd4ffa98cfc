#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "weldlab/field.hpp"

namespace weldlab {

enum class MeasureKind { subcritical, critical, truncated, transported };

std::string to_string(MeasureKind k);

// Piecewise-constant density on cells [edges[i], edges[i+1]].
class BoundaryMeasure {
 public:
  BoundaryMeasure() = default;
  BoundaryMeasure(std::vector<double> edges, std::vector<double> density, double scale,
                  MeasureKind kind, double param = 0.0);

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& density() const { return density_; }
  double scale() const { return scale_; }
  MeasureKind kind() const { return kind_; }
  double param() const { return param_; }
  std::size_t cells() const { return density_.size(); }

  double total() const { return cum_.back(); }
  double cell_mass(std::size_t i) const { return cum_[i + 1] - cum_[i]; }
  // nu([edges.front(), x]); linear inside cells, constant outside the support.
  double cumulative(double x) const;
  double mass(double a, double b) const;
  bool is_nonnegative() const;
  std::vector<std::size_t> negative_cells() const;

  // inf{x : F(x) >= q}; edges.front() for q <= 0.
  double quantile(double q) const;
  // sup{x : F(x) <= v}.
  double upper_quantile(double v) const;

  void write_csv(std::ostream& os) const;
  void write_cumulative_csv(std::ostream& os) const;

 private:
  void require_nonnegative(const char* op) const;
  std::vector<double> edges_;
  std::vector<double> density_;
  std::vector<double> cum_;
  double scale_ = 0.0;
  MeasureKind kind_ = MeasureKind::subcritical;
  double param_ = 0.0;
};

std::vector<double> cell_edges(const std::vector<double>& xs);

BoundaryMeasure subcritical_measure(const BoundaryFieldGrid& field, double gamma, double eps);
BoundaryMeasure critical_measure(const BoundaryFieldGrid& field, double eps);
BoundaryMeasure truncated_derivative_measure(const BoundaryFieldGrid& field, double beta, double eps);
BoundaryMeasure normalized_subcritical(const BoundaryFieldGrid& field, double gamma, double eps);

// Per-cell indicator of h_d/2 < log(1/d) + beta at every stored dyadic d in [eps, 1].
std::vector<bool> truncation_indicator(const BoundaryFieldGrid& field, double beta, double eps);

// X(q) = inf{x >= 0 : nu([0,x]) >= q},  Y(q) = sup{y <= 0 : nu([y,0]) >= q}.
std::pair<double, double> quantum_points(const BoundaryMeasure& m, double q);

// Measure in new coordinates y with old = psi(y), psi increasing:
// nu_new([a, b]) = nu([psi(a), psi(b)]).
BoundaryMeasure transport(const BoundaryMeasure& m, const std::vector<double>& new_edges,
                          const std::function<double(double)>& psi);

}  // namespace weldlab
