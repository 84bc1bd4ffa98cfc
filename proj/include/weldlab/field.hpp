#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "weldlab/paths.hpp"
#include "weldlab/rng.hpp"

namespace weldlab {

// Hierarchical log-correlated kernel. Layer j >= 1 is a stationary Gaussian
// field with covariance c_j(r) = int_{2^-j}^{2^{1-j}} (2/s) (1 - r/(L s))_+ ds,
// L = support. Summing layers 1..J gives Var h_eps = 2 log(1/eps) + kappa0 and,
// for r >= L max(eps, delta), Cov = -2 log r + 2 r / L + kappa0 (zero log
// constant when L = e). Level 0 is a constant N(0, kappa0) offset.
struct CovarianceSpec {
  double kappa0 = 0.0;
  double support = 2.718281828459045;

  double layer_covariance(int level, double r) const;
  // Cov(h_{2^-la}(x), h_{2^-lb}(y)) at |x - y| = r.
  double covariance(double r, int la, int lb) const;
  double variance(int level) const { return covariance(0.0, level, level); }

  std::string to_config() const;
  static CovarianceSpec from_config(const std::string& text);
};

class BoundaryFieldGrid {
 public:
  BoundaryFieldGrid() = default;
  // values are row-major: values[k * xs.size() + i] = h_{2^-levels[k]}(xs[i]).
  BoundaryFieldGrid(std::vector<double> xs, std::vector<int> levels, std::vector<double> values,
                    std::string model);

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<int>& levels() const { return levels_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& model() const { return model_; }
  std::size_t size() const { return xs_.size(); }
  std::size_t num_scales() const { return levels_.size(); }
  double scale(std::size_t k) const;
  bool has_scale(double eps) const;
  std::size_t scale_index(double eps) const;  // InvalidArgument if eps is not stored
  std::size_t level_index(int level) const;
  const double* row(std::size_t k) const { return values_.data() + k * xs_.size(); }
  double value(std::size_t k, std::size_t i) const { return values_[k * xs_.size() + i]; }
  bool is_symmetric() const;

  // Linear in x and in log2(1/eps); eps is clamped to the stored scale range.
  double interpolate(double x, double eps) const;
  // Bulk value at x + iy, approximated by the boundary average h_{max(eps, y)}(x).
  double bulk_value(std::complex<double> z, double eps) const;

  void write_ndjson(std::ostream& os) const;

 private:
  std::vector<double> xs_;
  std::vector<int> levels_;
  std::vector<double> values_;
  std::string model_;
};

// Cell-centred uniform grid on [left, right].
std::vector<double> standard_grid(std::size_t points = 1024, double left = -2.0, double right = 2.0);
std::vector<int> level_range(int first, int last);
// Dyadic exponent of eps; InvalidArgument if eps is not a power of two.
int dyadic_level(double eps);
// Level of the largest dyadic scale <= r, clamped to [first, last].
int radius_level(double r, int first, int last);

// Reusable sampler: precomputes circulant spectra for every layer.
class NeumannSampler {
 public:
  NeumannSampler(std::vector<double> xs, std::vector<int> levels, CovarianceSpec cov = {});
  ~NeumannSampler();
  NeumannSampler(const NeumannSampler&) = delete;
  NeumannSampler& operator=(const NeumannSampler&) = delete;

  BoundaryFieldGrid sample(RngStream& rng) const;
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<int>& levels() const { return levels_; }
  const CovarianceSpec& covariance() const { return cov_; }

 private:
  struct Layer;
  std::vector<double> xs_;
  std::vector<int> levels_;
  CovarianceSpec cov_;
  std::vector<std::unique_ptr<Layer>> layers_;  // index j - 1 for j = 1..max level
};

BoundaryFieldGrid sample_field(const std::vector<double>& xs, const std::vector<double>& scales,
                               const CovarianceSpec& cov, RngStream& rng);

// Wedge field: h_d(x) = R(-log max(|x|, d)) + N_d(x) - A_d(|x|), where A_d is the
// symmetric average of N at the coarser of d and the radius scale of |x|.
BoundaryFieldGrid assemble_wedge_field(const BoundaryFieldGrid& neumann, const Path& radial,
                                       const std::string& model);

// s -> (h_{eps(r)}(r) + h_{eps(r)}(-r)) / 2 at r = e^{-s} over positive grid radii,
// ordered by increasing s.
Path radial_part(const BoundaryFieldGrid& field);

BoundaryFieldGrid add_constant(const BoundaryFieldGrid& field, double C);
// Translates the grid so z0 becomes the origin; z0 must be a multiple of the spacing.
BoundaryFieldGrid recentre(const BoundaryFieldGrid& field, double z0);

}  // namespace weldlab
