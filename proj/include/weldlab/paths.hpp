#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "weldlab/rng.hpp"

namespace weldlab {

struct Path {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::size_t size() const { return times.size(); }
  // Linear interpolation; throws OutOfRange outside [times.front(), times.back()].
  double at(double t) const;
};

std::vector<double> uniform_grid(double t0, double t1, std::size_t steps);

// B started at `start` with E[dB] = drift dt and Var[dB] = speed dt.
Path sample_bm(const std::vector<double>& grid, double drift, double speed, double start,
               RngStream& rng);

// |start e1 + sqrt(speed) W| for a 3-d Brownian motion W: exact on the grid.
Path sample_bessel3(const std::vector<double>& grid, double start, RngStream& rng,
                    double speed = 1.0);

// Path of (B_{speed s} + alpha s) conditioned to stay below Q s for all s >= 0,
// returned as Q s - X_s with X a drift-(Q - alpha) motion conditioned positive.
// Q == alpha gives Q s - BES3.
Path sample_conditioned_below_line(const std::vector<double>& grid, double alpha, double Q,
                                   double speed, RngStream& rng);

// M_t = (-B_t + g a t + beta) 1{-B_u + g a u + beta > 0 on grid u <= t} exp(g B_t - g^2 a t / 2).
double martingale_weight(const Path& path, double beta, double gamma_w, double alpha_var,
                         double t);

// Marginal CDF of a speed-`speed` BES(3) started at r0, evaluated at time t.
double bessel3_cdf(double r, double r0, double t, double speed = 1.0);

void write_csv(const Path& path, std::ostream& os);
Path read_csv(std::istream& is);

}  // namespace weldlab
