#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weldlab/field.hpp"
#include "weldlab/measures.hpp"
#include "weldlab/paths.hpp"

namespace weldlab {

enum class Parametrisation { last_exit, unit_circle, strip };

std::string to_string(Parametrisation p);
Parametrisation parse_parametrisation(const std::string& s);

double q_gamma(double gamma);

struct WedgeGridSpec {
  double s_min = -4.0;
  double s_max = 8.0;
  double ds = 1.0 / 256.0;
};

// Strip-coordinate boundary values: for each half-plane level k and grid radius
// e^{-s}, bottom = h(e^{-s}) - Q s and top = h(-e^{-s}) - Q s.
struct StripField {
  std::vector<double> s;
  std::vector<int> levels;
  std::vector<double> bottom;  // row-major [level][point]
  std::vector<double> top;
};

struct WedgeSample {
  double gamma = 2.0;
  double alpha = 2.0;
  double Q = 2.0;
  Parametrisation parametrisation = Parametrisation::last_exit;
  // Half-plane embedding behind a strip description.
  Parametrisation embedding = Parametrisation::last_exit;
  Path radial;  // h_rad(e^{-s}) in the half-plane, h_rad(e^{-s}) - Q s in the strip
  BoundaryFieldGrid field;
  std::optional<StripField> strip;
  // Field the sample was drawn with and the scaling y -> source_scale * y back to it.
  BoundaryFieldGrid source_field;
  double source_scale = 1.0;
  // Overshoot of the grid-aligned crossing after a reparametrisation.
  double crossing_slack = 0.0;
};

Path sample_wedge_radial(double gamma, double alpha, Parametrisation p, const WedgeGridSpec& grid,
                         RngStream& rng);

WedgeSample sample_wedge(double gamma, double alpha, Parametrisation p, const WedgeGridSpec& grid,
                         const NeumannSampler& lateral, RngStream& rng);

// Throws NumericFailure naming the first violated parametrisation invariant.
void check_invariants(const WedgeSample& w);

WedgeSample reparametrise(const WedgeSample& w, Parametrisation target);

enum class StripDirection { to_strip, to_halfplane };
WedgeSample strip_halfplane_change(const WedgeSample& w, StripDirection direction);

// Truncated measure of the sample, transported from the field it was drawn with.
BoundaryMeasure wedge_measure(const WedgeSample& w, double beta, double eps);

struct ZoomResult {
  BoundaryFieldGrid field;
  BoundaryMeasure measure;
  double r = 1.0;
};

// Adds C, then rescales by r_C so that [0, 1] carries unit truncated-critical mass.
ZoomResult zoom_scale(const BoundaryFieldGrid& field, double C, double beta, double eps);

}  // namespace weldlab
