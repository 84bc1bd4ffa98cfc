#include "weldlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "weldlab/errors.hpp"

namespace weldlab {

namespace {

void check_grid(const std::vector<double>& grid) {
  require(!grid.empty(), "time grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "time grid must be strictly increasing");
  for (double t : grid) require(std::isfinite(t), "time grid has a non-finite entry");
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double Path::at(double t) const {
  if (times.empty() || t < times.front() || t > times.back())
    throw OutOfRange("path evaluated outside its time range");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return values.back();
  const std::size_t k = static_cast<std::size_t>(it - times.begin());
  if (k == 0) return values.front();
  const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t steps) {
  require(steps > 0 && t1 > t0, "uniform_grid needs t1 > t0 and steps > 0");
  std::vector<double> g(steps + 1);
  const double dt = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) g[i] = t0 + dt * static_cast<double>(i);
  g[steps] = t1;
  return g;
}

Path sample_bm(const std::vector<double>& grid, double drift, double speed, double start,
               RngStream& rng) {
  check_grid(grid);
  require(speed >= 0.0, "sample_bm: speed must be non-negative");
  Path p;
  p.label = "bm";
  p.params = {{"drift", drift}, {"speed", speed}, {"start", start}};
  p.seed = rng.seed();
  p.stream_id = rng.stream_id();
  p.times = grid;
  p.values.resize(grid.size());
  p.values[0] = start;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dt = grid[i] - grid[i - 1];
    p.values[i] = p.values[i - 1] + drift * dt + std::sqrt(speed * dt) * rng.normal();
  }
  return p;
}

Path sample_bessel3(const std::vector<double>& grid, double start, RngStream& rng,
                    double speed) {
  check_grid(grid);
  require(start >= 0.0, "sample_bessel3: start must be non-negative");
  require(speed > 0.0, "sample_bessel3: speed must be positive");
  Path p;
  p.label = "bessel3";
  p.params = {{"start", start}, {"speed", speed}};
  p.seed = rng.seed();
  p.stream_id = rng.stream_id();
  p.times = grid;
  p.values.resize(grid.size());
  double x = start, y = 0.0, z = 0.0;
  p.values[0] = start;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double sd = std::sqrt(speed * (grid[i] - grid[i - 1]));
    x += sd * rng.normal();
    y += sd * rng.normal();
    z += sd * rng.normal();
    p.values[i] = std::sqrt(x * x + y * y + z * z);
  }
  return p;
}

// X = 2M - Y with Y a drift-delta motion and M its running maximum (Rogers-Pitman);
// the maximum over each step is drawn exactly from the Brownian bridge law.
Path sample_conditioned_below_line(const std::vector<double>& grid, double alpha, double Q,
                                   double speed, RngStream& rng) {
  check_grid(grid);
  require(Q >= alpha, "sample_conditioned_below_line: Q must be >= alpha");
  require(speed > 0.0, "sample_conditioned_below_line: speed must be positive");
  require(grid.front() >= 0.0, "sample_conditioned_below_line: grid must start at s >= 0");
  const double delta = Q - alpha;
  Path p;
  p.label = delta == 0.0 ? "neg_bessel3_plus_line" : "conditioned_below_line";
  p.params = {{"alpha", alpha}, {"Q", Q}, {"speed", speed}};
  p.seed = rng.seed();
  p.stream_id = rng.stream_id();
  p.times = grid;
  p.values.resize(grid.size());

  double y = 0.0, m = 0.0, t = 0.0;
  auto advance = [&](double dt) {
    const double y1 = y + delta * dt + std::sqrt(speed * dt) * rng.normal();
    const double d = y1 - y;
    const double bridge_max = 0.5 * (y + y1 + std::sqrt(d * d - 2.0 * speed * dt * std::log(rng.uniform())));
    m = std::max(m, bridge_max);
    y = y1;
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > t) advance(grid[i] - t);
    t = grid[i];
    p.values[i] = Q * t - (2.0 * m - y);
  }
  return p;
}

double martingale_weight(const Path& path, double beta, double gamma_w, double alpha_var,
                         double t) {
  require(beta > 0.0 && gamma_w > 0.0 && alpha_var > 0.0,
          "martingale_weight: beta, gamma and alpha must be positive");
  if (path.times.empty() || t < path.times.front() || t > path.times.back())
    throw InvalidArgument("martingale_weight: t outside the path range");
  const double ga = gamma_w * alpha_var;
  for (std::size_t i = 0; i < path.size() && path.times[i] <= t; ++i) {
    if (-path.values[i] + ga * path.times[i] + beta <= 0.0) return 0.0;
  }
  const double bt = path.at(t);
  const double level = -bt + ga * t + beta;
  if (level <= 0.0) return 0.0;
  return level * std::exp(gamma_w * bt - 0.5 * gamma_w * ga * t);
}

double bessel3_cdf(double r, double r0, double t, double speed) {
  if (r <= 0.0) return 0.0;
  require(t > 0.0 && speed > 0.0 && r0 >= 0.0, "bessel3_cdf: bad arguments");
  const double s = speed * t;
  const double sd = std::sqrt(s);
  if (r0 < 1e-9 * sd) {
    const double u = r / sd;
    return 2.0 * norm_cdf(u) - 1.0 - std::sqrt(2.0 / M_PI) * u * std::exp(-0.5 * u * u);
  }
  auto phi = [&](double x) { return std::exp(-x * x / (2.0 * s)) / std::sqrt(2.0 * M_PI * s); };
  const double v = norm_cdf((r - r0) / sd) + norm_cdf((r + r0) / sd) - 1.0 +
                   (s / r0) * (phi(r + r0) - phi(r - r0));
  return std::clamp(v, 0.0, 1.0);
}

void write_csv(const Path& path, std::ostream& os) {
  os << "# label=" << path.label << " seed=" << path.seed << " stream=" << path.stream_id;
  for (const auto& [k, v] : path.params) os << ' ' << k << '=' << fmt(v);
  os << "\ntime,value\n";
  for (std::size_t i = 0; i < path.size(); ++i)
    os << fmt(path.times[i]) << ',' << fmt(path.values[i]) << '\n';
}

Path read_csv(std::istream& is) {
  Path p;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "label") p.label = v;
        else if (k == "seed") p.seed = std::stoull(v);
        else if (k == "stream") p.stream_id = std::stoull(v);
        else p.params[k] = std::stod(v);
      }
      continue;
    }
    if (line == "time,value") continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, "read_csv: malformed row");
    p.times.push_back(std::stod(line.substr(0, comma)));
    p.values.push_back(std::stod(line.substr(comma + 1)));
  }
  return p;
}

}  // namespace weldlab
