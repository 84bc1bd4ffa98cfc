#include "weldlab/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>

#include "weldlab/errors.hpp"

namespace weldlab {

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double CovarianceSpec::layer_covariance(int level, double r) const {
  require(level >= 1, "layer_covariance: level must be >= 1");
  r = std::fabs(r);
  const double a = std::ldexp(1.0, -level);
  const double la = support * a;
  if (r <= la) return 2.0 * std::log(2.0) - r / la;
  if (r < 2.0 * la) return 2.0 * std::log(2.0 * la / r) - 2.0 + r / la;
  return 0.0;
}

double CovarianceSpec::covariance(double r, int la, int lb) const {
  double c = kappa0;
  for (int j = 1; j <= std::min(la, lb); ++j) c += layer_covariance(j, r);
  return c;
}

std::string CovarianceSpec::to_config() const {
  return "kappa0 = " + fmt(kappa0) + "\nsupport = " + fmt(support) + "\n";
}

CovarianceSpec CovarianceSpec::from_config(const std::string& text) {
  CovarianceSpec c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k == "kappa0") c.kappa0 = std::stod(v);
    else if (k == "support") c.support = std::stod(v);
    else throw InvalidArgument("CovarianceSpec: unknown key '" + k + "'");
  }
  require(c.kappa0 >= 0.0 && c.support > 0.0, "CovarianceSpec: kappa0 >= 0 and support > 0");
  return c;
}

// ---------------------------------------------------------------- grid

BoundaryFieldGrid::BoundaryFieldGrid(std::vector<double> xs, std::vector<int> levels,
                                     std::vector<double> values, std::string model)
    : xs_(std::move(xs)), levels_(std::move(levels)), values_(std::move(values)),
      model_(std::move(model)) {
  require(!xs_.empty() && !levels_.empty(), "BoundaryFieldGrid: empty grid");
  require(values_.size() == xs_.size() * levels_.size(), "BoundaryFieldGrid: value count mismatch");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    require(xs_[i] > xs_[i - 1], "BoundaryFieldGrid: xs must be increasing");
  for (std::size_t k = 1; k < levels_.size(); ++k)
    require(levels_[k] == levels_[k - 1] + 1, "BoundaryFieldGrid: levels must be consecutive");
}

double BoundaryFieldGrid::scale(std::size_t k) const { return std::ldexp(1.0, -levels_.at(k)); }

bool BoundaryFieldGrid::has_scale(double eps) const {
  int l;
  try {
    l = dyadic_level(eps);
  } catch (const InvalidArgument&) {
    return false;
  }
  return l >= levels_.front() && l <= levels_.back();
}

std::size_t BoundaryFieldGrid::scale_index(double eps) const {
  if (!has_scale(eps)) throw InvalidArgument("scale " + fmt(eps) + " is not stored in the field");
  return static_cast<std::size_t>(dyadic_level(eps) - levels_.front());
}

std::size_t BoundaryFieldGrid::level_index(int level) const {
  require(level >= levels_.front() && level <= levels_.back(), "level not stored in the field");
  return static_cast<std::size_t>(level - levels_.front());
}

bool BoundaryFieldGrid::is_symmetric() const {
  const std::size_t n = xs_.size();
  const double tol = 1e-12 * std::max(1.0, std::fabs(xs_.back()));
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(xs_[i] + xs_[n - 1 - i]) > tol) return false;
  return true;
}

double BoundaryFieldGrid::interpolate(double x, double eps) const {
  require(eps > 0.0, "interpolate: eps must be positive");
  const double span = xs_.back() - xs_.front();
  if (x < xs_.front() - 1e-12 * span || x > xs_.back() + 1e-12 * span)
    throw OutOfRange("interpolate: x outside the field grid");
  x = std::clamp(x, xs_.front(), xs_.back());
  std::size_t i = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  if (i == 0) i = 1;
  if (i >= xs_.size()) i = xs_.size() - 1;
  const double wx = xs_.size() == 1 ? 0.0 : (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  const double lev = std::clamp(-std::log2(eps), static_cast<double>(levels_.front()),
                                static_cast<double>(levels_.back()));
  std::size_t k0 = static_cast<std::size_t>(std::floor(lev) - levels_.front());
  if (k0 + 1 >= levels_.size()) k0 = levels_.size() >= 2 ? levels_.size() - 2 : 0;
  const double wl = levels_.size() == 1 ? 0.0 : lev - (levels_.front() + static_cast<double>(k0));
  auto at = [&](std::size_t k) {
    return (1.0 - wx) * value(k, i - 1) + wx * value(k, i);
  };
  if (levels_.size() == 1) return at(0);
  return (1.0 - wl) * at(k0) + wl * at(k0 + 1);
}

double BoundaryFieldGrid::bulk_value(std::complex<double> z, double eps) const {
  return interpolate(z.real(), std::max(eps, z.imag()));
}

void BoundaryFieldGrid::write_ndjson(std::ostream& os) const {
  for (std::size_t k = 0; k < levels_.size(); ++k)
    for (std::size_t i = 0; i < xs_.size(); ++i)
      os << "{\"x\":" << fmt(xs_[i]) << ",\"scale\":" << fmt(scale(k))
         << ",\"value\":" << fmt(value(k, i)) << "}\n";
}

std::vector<double> standard_grid(std::size_t points, double left, double right) {
  require(points >= 2 && right > left, "standard_grid: need >= 2 points and right > left");
  std::vector<double> xs(points);
  const double h = (right - left) / static_cast<double>(points);
  for (std::size_t i = 0; i < points; ++i) xs[i] = left + (static_cast<double>(i) + 0.5) * h;
  return xs;
}

std::vector<int> level_range(int first, int last) {
  require(first >= 0 && last >= first, "level_range: need 0 <= first <= last");
  std::vector<int> l;
  for (int j = first; j <= last; ++j) l.push_back(j);
  return l;
}

int dyadic_level(double eps) {
  require(eps > 0.0 && eps <= 1.0, "scale must lie in (0, 1]");
  int e;
  const double m = std::frexp(eps, &e);
  if (m != 0.5) throw InvalidArgument("scale " + fmt(eps) + " is not dyadic");
  return 1 - e;
}

int radius_level(double r, int first, int last) {
  if (r <= 0.0) return last;
  const int j = static_cast<int>(std::ceil(std::log2(1.0 / r) - 1e-12));
  return std::clamp(j, first, last);
}

// ---------------------------------------------------------------- sampler

struct NeumannSampler::Layer {
  bool iid = true;
  double sd = 0.0;
  std::size_t m = 0;
  std::vector<double> root;  // sqrt(lambda_k / m)
  fftw_plan plan = nullptr;
};

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

NeumannSampler::NeumannSampler(std::vector<double> xs, std::vector<int> levels, CovarianceSpec cov)
    : xs_(std::move(xs)), levels_(std::move(levels)), cov_(cov) {
  require(xs_.size() >= 2, "NeumannSampler: need >= 2 grid points");
  require(!levels_.empty() && levels_.front() >= 0, "NeumannSampler: bad levels");
  for (std::size_t k = 1; k < levels_.size(); ++k)
    require(levels_[k] == levels_[k - 1] + 1, "NeumannSampler: levels must be consecutive");
  const double h = (xs_.back() - xs_.front()) / static_cast<double>(xs_.size() - 1);
  for (std::size_t i = 1; i < xs_.size(); ++i)
    require(std::fabs(xs_[i] - xs_[i - 1] - h) <= 1e-9 * h, "NeumannSampler: grid must be uniform");
  const std::size_t n = xs_.size();

  for (int j = 1; j <= levels_.back(); ++j) {
    auto layer = std::make_unique<Layer>();
    const double reach = 2.0 * cov_.support * std::ldexp(1.0, -j);
    if (reach <= h) {
      layer->iid = true;
      layer->sd = std::sqrt(cov_.layer_covariance(j, 0.0));
    } else {
      layer->iid = false;
      const std::size_t m = next_pow2(n + static_cast<std::size_t>(std::ceil(reach / h)) + 1);
      layer->m = m;
      fftw_complex* buf = fftw_alloc_complex(m);
      for (std::size_t l = 0; l < m; ++l) {
        const double d = static_cast<double>(std::min(l, m - l)) * h;
        buf[l][0] = cov_.layer_covariance(j, d);
        buf[l][1] = 0.0;
      }
      {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(fwd);
        fftw_destroy_plan(fwd);
        layer->plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
      }
      double lmax = 0.0;
      for (std::size_t k = 0; k < m; ++k) lmax = std::max(lmax, buf[k][0]);
      layer->root.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        double lam = buf[k][0];
        if (lam < -1e-9 * lmax) {
          fftw_free(buf);
          throw NumericFailure("circulant embedding produced a negative eigenvalue");
        }
        layer->root[k] = std::sqrt(std::max(lam, 0.0) / static_cast<double>(m));
      }
      fftw_free(buf);
    }
    layers_.push_back(std::move(layer));
  }
}

NeumannSampler::~NeumannSampler() {
  std::lock_guard<std::mutex> lock(fftw_mutex());
  for (auto& l : layers_)
    if (l->plan) fftw_destroy_plan(l->plan);
}

BoundaryFieldGrid NeumannSampler::sample(RngStream& rng) const {
  const std::size_t n = xs_.size();
  std::vector<double> acc(n, 0.0);
  if (cov_.kappa0 > 0.0) {
    const double c = std::sqrt(cov_.kappa0) * rng.normal();
    std::fill(acc.begin(), acc.end(), c);
  }
  std::vector<double> values(n * levels_.size());
  auto store = [&](int j) {
    if (j >= levels_.front())
      std::copy(acc.begin(), acc.end(), values.begin() + static_cast<std::ptrdiff_t>((j - levels_.front()) * n));
  };
  store(0);
  std::size_t bufsize = 0;
  for (const auto& l : layers_) bufsize = std::max(bufsize, l->m);
  fftw_complex* buf = bufsize ? fftw_alloc_complex(bufsize) : nullptr;
  for (int j = 1; j <= levels_.back(); ++j) {
    const Layer& layer = *layers_[static_cast<std::size_t>(j - 1)];
    if (layer.iid) {
      for (std::size_t i = 0; i < n; ++i) acc[i] += layer.sd * rng.normal();
    } else {
      for (std::size_t k = 0; k < layer.m; ++k) {
        buf[k][0] = layer.root[k] * rng.normal();
        buf[k][1] = layer.root[k] * rng.normal();
      }
      fftw_execute_dft(layer.plan, buf, buf);
      for (std::size_t i = 0; i < n; ++i) acc[i] += buf[i][0];
    }
    store(j);
  }
  if (buf) fftw_free(buf);
  return BoundaryFieldGrid(xs_, levels_, std::move(values), "neumann");
}

BoundaryFieldGrid sample_field(const std::vector<double>& xs, const std::vector<double>& scales,
                               const CovarianceSpec& cov, RngStream& rng) {
  require(!scales.empty(), "sample_field: no scales");
  std::vector<int> levels;
  for (double e : scales) levels.push_back(dyadic_level(e));
  for (std::size_t k = 1; k < levels.size(); ++k)
    require(levels[k] == levels[k - 1] + 1, "sample_field: scales must halve consecutively");
  NeumannSampler sampler(xs, levels, cov);
  return sampler.sample(rng);
}

// ---------------------------------------------------------------- wedge assembly

BoundaryFieldGrid assemble_wedge_field(const BoundaryFieldGrid& neumann, const Path& radial,
                                       const std::string& model) {
  require(neumann.is_symmetric(), "assemble_wedge_field: grid must be symmetric about 0");
  require(radial.size() >= 2, "assemble_wedge_field: radial path too short");
  const auto& xs = neumann.xs();
  const auto& levels = neumann.levels();
  const std::size_t n = xs.size();
  const double smin = radial.times.front(), smax = radial.times.back();
  std::vector<double> values(n * levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const int j = levels[k];
    const double d = std::ldexp(1.0, -j);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::fabs(xs[i]);
      const int jr = radius_level(r, levels.front(), levels.back());
      const std::size_t ka = neumann.level_index(std::min(j, jr));
      const double avg = 0.5 * (neumann.value(ka, i) + neumann.value(ka, n - 1 - i));
      const double s = std::clamp(-std::log(std::max(r, d)), smin, smax);
      values[k * n + i] = radial.at(s) + neumann.value(k, i) - avg;
    }
  }
  return BoundaryFieldGrid(xs, levels, std::move(values), model);
}

Path radial_part(const BoundaryFieldGrid& field) {
  if (!field.is_symmetric()) throw InvalidArgument("radial_part: grid must be symmetric about 0");
  const auto& xs = field.xs();
  const auto& levels = field.levels();
  const std::size_t n = xs.size();
  Path p;
  p.label = "radial_part";
  for (std::size_t i = n; i-- > 0;) {
    if (xs[i] <= 0.0) break;
    const int jr = radius_level(xs[i], levels.front(), levels.back());
    const std::size_t k = field.level_index(jr);
    p.times.push_back(-std::log(xs[i]));
    p.values.push_back(0.5 * (field.value(k, i) + field.value(k, n - 1 - i)));
  }
  return p;
}

BoundaryFieldGrid add_constant(const BoundaryFieldGrid& field, double C) {
  std::vector<double> v = field.values();
  for (double& x : v) x += C;
  return BoundaryFieldGrid(field.xs(), field.levels(), std::move(v), field.model());
}

BoundaryFieldGrid recentre(const BoundaryFieldGrid& field, double z0) {
  const auto& xs = field.xs();
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  const double steps = z0 / h;
  if (std::fabs(steps - std::round(steps)) > 1e-9)
    throw InvalidArgument("recentre: z0 is not a multiple of the grid spacing");
  const double shift = std::round(steps) * h;
  std::vector<double> nx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) nx[i] = xs[i] - shift;
  return BoundaryFieldGrid(std::move(nx), field.levels(), field.values(), field.model());
}

}  // namespace weldlab
