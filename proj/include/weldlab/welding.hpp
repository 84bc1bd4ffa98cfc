#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "weldlab/field.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/measures.hpp"

namespace weldlab {

struct CorrespondencePair {
  double x = 0.0;  // > 0
  double y = 0.0;  // < 0
  double q = 0.0;
};

struct Correspondence {
  std::vector<CorrespondencePair> pairs;
  std::string source;

  void validate() const;
  void write_csv(std::ostream& os) const;
};

// q_k = k / per_unit for k >= 1 up to t, with t itself appended when it is not on the lattice.
std::vector<double> quantum_grid(double t, double per_unit = 256.0);

Correspondence quantum_correspondence(const BoundaryMeasure& right, const BoundaryMeasure& left,
                                      const std::vector<double>& q_grid);

SlitMap elementary_weld(double p, double q);

struct WeldedInterface {
  std::vector<cplx> curve;     // curve[0] = 0 is the base, curve.back() the image of the origin
  std::vector<SlitMap> maps;   // maps[0] is applied first
  double total_shift = 0.0;    // sum of q - p: f(z) = z + total_shift + O(1/z)

  std::size_t pair_vertex(std::size_t k) const { return maps.size() - 1 - k; }
  cplx map(cplx z) const;
  double map_real(double x) const;
  cplx inverse(cplx w) const;
  // Real preimage of a real point and |(f^{-1})'| there.
  std::pair<double, double> inverse_real(double y) const;
  // Driving function of the seam unzipped from its base.
  DrivingFunction driving() const;
  // Smallest distance between non-adjacent segments over the largest segment length.
  double simplicity_ratio() const;
};

WeldedInterface build_welding_curve(const Correspondence& corr);

// A map psi from new boundary coordinates to old (possibly bulk) points, with |psi'|.
struct CoordinateMap {
  std::function<std::pair<cplx, double>(double)> eval;
};

CoordinateMap scaling_map(double r);

// h'_eps(y) = h_{eps |psi'(y)|}(psi(y)) + Q log|psi'(y)|, bulk points through the
// boundary surrogate h_{max(eps, Im z)}(Re z).
BoundaryFieldGrid push_field(const BoundaryFieldGrid& field, const CoordinateMap& psi, double Q,
                             const std::vector<double>& new_xs);

struct SideLengths {
  double left = 0.0;
  double right = 0.0;
  double x_minus = 0.0;
  double x_plus = 0.0;
};

SideLengths side_lengths(const BoundaryFieldGrid& field, const DrivingFunction& eta, double t,
                         double eps, double beta = 5.0, std::size_t points = 1024);
// One push, several scales.
std::vector<SideLengths> side_lengths(const BoundaryFieldGrid& field, const DrivingFunction& eta,
                                      double t, const std::vector<double>& eps, double beta = 5.0,
                                      std::size_t points = 1024);

struct ZipResult {
  BoundaryFieldGrid field;
  WeldedInterface seam;
  std::vector<cplx> interface;
  Correspondence correspondence;
  double X = 0.0;
  double Y = 0.0;
};

// Welds [Y(t), 0] to [0, X(t)] by truncated-critical length, pushes the field forward
// (Q = 2) onto a symmetric grid inside the image of the field window, and maps
// the existing curve along.
ZipResult zip_up(const BoundaryFieldGrid& field, const std::vector<cplx>& existing_curve, double t,
                 double eps, double beta = 5.0, double pairs_per_unit = 256.0);

}  // namespace weldlab
