#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "weldlab/rng.hpp"

namespace weldlab {

using cplx = std::complex<double>;

// Driving values W_k held constant on [times[k], times[k+1]).
struct DrivingFunction {
  std::vector<double> times;
  std::vector<double> values;
  double kappa = -1.0;  // negative when not generated as sqrt(kappa) B
  std::string scheme = "vertical-slit";

  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  double horizon() const { return times.back(); }
  // Right-continuous piecewise-constant value.
  double at(double t) const;
  // Linear interpolation between grid values.
  double interpolate(double t) const;
};

DrivingFunction sample_driving(double kappa, double T, double dt, RngStream& rng);
// W = sqrt(kappa) B for a given standard Brownian path sampled every dt.
DrivingFunction driving_from_brownian(const std::vector<double>& bm, double kappa, double dt);
DrivingFunction zero_driving(double T, double dt);

// Square root of w chosen in the closed upper half-plane; for real w the sign of
// `real_sign` picks the branch.
cplx sqrt_upper(cplx w, double real_sign = 1.0);

enum class FlowDirection { forward, reverse };

class LoewnerFlow {
 public:
  LoewnerFlow(DrivingFunction driving, FlowDirection direction);

  const DrivingFunction& driving() const { return driving_; }
  FlowDirection direction() const { return direction_; }
  double capacity(double t) const { return 2.0 * t; }

  // g~_t(z), or g~_t(z) - W_t when centred. Throws SwallowedPoint for hull points.
  cplx forward_map(double t, cplx z, bool centred = false) const;
  // Uncentred evolution of z from time t1 to t2.
  cplx forward_between(double t1, double t2, cplx z) const;
  // Centred reverse flow f_t(z).
  cplx reverse_map(double t, cplx z) const;
  // f_t^{-1}(w).
  cplx reverse_inverse(double t, cplx w) const;
  // g~_t^{-1}(w) for the forward flow.
  cplx forward_inverse(double t, cplx w) const;
  // Time at which the reverse flow sends x to 0; +inf if not before the horizon.
  double swallow_time(double x) const;
  std::vector<double> swallow_times(const std::vector<double>& xs) const;
  // f_{t_m}(z_j) for every mesh time (rows) and point (columns).
  std::vector<cplx> reverse_trajectories(const std::vector<cplx>& zs,
                                         const std::vector<double>& mesh_times) const;
  // Tips g~_{t_k}^{-1}(W_{k-1}) of the vertical-slit hulls, starting with 0.
  std::vector<cplx> trace(std::size_t every = 1) const;

 private:
  std::size_t step_of(double t) const;
  DrivingFunction driving_;
  FlowDirection direction_;
};

struct CaratheodoryMesh {
  std::size_t time_points = 64;
  std::size_t space_points = 64;
  std::size_t swallow_points = 129;
};

// Sup distance of reverse flows on [0, T] x ([-K, K] + i eps), together with swallowing
// times on [-K, K] at points either flow swallows by T. Swallowing times are capped at
// the shorter driving horizon, so drivings longer than T sharpen the comparison.
double caratheodory_plus_distance(const LoewnerFlow& a, const LoewnerFlow& b, double T, double eps,
                                  double K, const CaratheodoryMesh& mesh = {});

// Conformal map from H onto H minus a straight slit from 0:
// f(z) = (z + q)^{q/(p+q)} (z - p)^{p/(p+q)} = z + (q - p) - pq/(2z) + O(z^-2).
struct SlitMap {
  double p = 0.0;
  double q = 0.0;

  double a() const { return q / (p + q); }
  double b() const { return p / (p + q); }
  double shift() const { return q - p; }
  double capacity_time() const { return 0.25 * p * q; }
  cplx tip() const;
  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  // Preimage in the closed upper half-plane; real w gives a real preimage.
  cplx inverse(cplx w) const;
  double inverse_real(double w) const;
  // The slit map whose tip is w.
  static SlitMap from_tip(cplx w);
};

// Tilted-slit zipper: unzips the polyline from its base; the returned times are
// cumulative capacities pq/4 and the values are cumulative shifts q - p.
DrivingFunction extract_driving(const std::vector<cplx>& curve);

// Throws InvalidCurve when the polyline leaves the open half-plane or self-intersects.
void validate_curve(const std::vector<cplx>& curve);

void write_csv(const DrivingFunction& d, std::ostream& os);
void write_curve_csv(const std::vector<cplx>& curve, std::ostream& os);

}  // namespace weldlab
