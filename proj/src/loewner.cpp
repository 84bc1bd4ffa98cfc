#include "weldlab/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "weldlab/errors.hpp"

namespace weldlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

// One forward vertical-slit step with constant driving W over duration d.
cplx forward_step(cplx z, double W, double d) {
  const cplx u = z - W;
  if (u.imag() == 0.0) return {W + sgn(u.real()) * std::sqrt(u.real() * u.real() + 4.0 * d), 0.0};
  return W + sqrt_upper(u * u + 4.0 * d, sgn(u.real()));
}

// One reverse step; real points that reach the base move onto the slit.
cplx reverse_step(cplx z, double W, double d) {
  const cplx u = z - W;
  if (u.imag() == 0.0) {
    const double c2 = u.real() * u.real() - 4.0 * d;
    if (c2 > 0.0) return {W + sgn(u.real()) * std::sqrt(c2), 0.0};
    return {W, std::sqrt(-c2)};
  }
  return W + sqrt_upper(u * u - 4.0 * d, sgn(u.real()));
}

cplx clog_upper(cplx w) {
  if (w.imag() <= 0.0 && w.real() < 0.0) return {std::log(-w.real()), kPi};
  if (w.imag() < 0.0) w = {w.real(), 0.0};
  return std::log(w);
}

}  // namespace

cplx sqrt_upper(cplx w, double real_sign) {
  cplx r = std::sqrt(w);
  if (r.imag() < 0.0) r = -r;
  if (r.imag() == 0.0 && real_sign < 0.0) r = -r;
  return r;
}

// ---------------------------------------------------------------- driving

double DrivingFunction::at(double t) const {
  require(!times.empty(), "DrivingFunction: empty");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

double DrivingFunction::interpolate(double t) const {
  require(!times.empty(), "DrivingFunction: empty");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
  const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

DrivingFunction sample_driving(double kappa, double T, double dt, RngStream& rng) {
  require(dt > 0.0 && T > 0.0 && kappa >= 0.0, "sample_driving: need dt > 0, T > 0, kappa >= 0");
  const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
  require(n >= 1, "sample_driving: horizon shorter than one step");
  std::vector<double> bm(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) bm[k] = bm[k - 1] + std::sqrt(dt) * rng.normal();
  return driving_from_brownian(bm, kappa, dt);
}

DrivingFunction driving_from_brownian(const std::vector<double>& bm, double kappa, double dt) {
  require(bm.size() >= 2 && dt > 0.0 && kappa >= 0.0, "driving_from_brownian: bad arguments");
  DrivingFunction d;
  d.kappa = kappa;
  d.times.resize(bm.size());
  d.values.resize(bm.size());
  const double s = std::sqrt(kappa);
  for (std::size_t k = 0; k < bm.size(); ++k) {
    d.times[k] = dt * static_cast<double>(k);
    d.values[k] = s * (bm[k] - bm[0]);
  }
  return d;
}

DrivingFunction zero_driving(double T, double dt) {
  const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
  require(n >= 1, "zero_driving: horizon shorter than one step");
  return driving_from_brownian(std::vector<double>(n + 1, 0.0), 0.0, dt);
}

// ---------------------------------------------------------------- flow

LoewnerFlow::LoewnerFlow(DrivingFunction driving, FlowDirection direction)
    : driving_(std::move(driving)), direction_(direction) {
  require(driving_.times.size() >= 2 && driving_.times.size() == driving_.values.size(),
          "LoewnerFlow: driving needs >= 2 grid points");
  require(driving_.times.front() == 0.0 && driving_.values.front() == 0.0,
          "LoewnerFlow: driving must start at W_0 = 0 at time 0");
  for (std::size_t k = 1; k < driving_.times.size(); ++k)
    require(driving_.times[k] > driving_.times[k - 1], "LoewnerFlow: times must increase");
}

std::size_t LoewnerFlow::step_of(double t) const {
  const auto& ts = driving_.times;
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  return static_cast<std::size_t>(it - ts.begin()) - 1;
}

namespace {

template <class Step>
cplx advance(const DrivingFunction& d, cplx z, double t1, double t2, Step step) {
  const auto& ts = d.times;
  const double tol = 1e-13 * ts.back();
  require(t1 >= -tol && t2 <= ts.back() + tol && t1 <= t2 + tol, "Loewner flow: time outside horizon");
  t2 = std::min(t2, ts.back());
  std::size_t k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t1) - ts.begin());
  k = k == 0 ? 0 : k - 1;
  double t = t1;
  while (k + 1 < ts.size() && t < t2 - tol) {
    double end = ts[k + 1];
    if (end > t2 + tol) end = t2;
    const double dt = end - t;
    if (dt > 0.0) z = step(z, d.values[k], dt);
    t = end;
    if (end >= ts[k + 1] - tol) ++k;
  }
  return z;
}

}  // namespace

cplx LoewnerFlow::forward_map(double t, cplx z, bool centred) const {
  const bool upper = z.imag() > 0.0;
  const cplx g = advance(driving_, z, 0.0, t, [](cplx w, double W, double d) {
    const bool up = w.imag() > 0.0;
    const cplx r = forward_step(w, W, d);
    if (up && !(r.imag() > 0.0)) throw SwallowedPoint("forward_map: point swallowed by the hull");
    return r;
  });
  if (upper && !(g.imag() > 0.0)) throw SwallowedPoint("forward_map: point swallowed by the hull");
  return centred ? g - driving_.at(t) : g;
}

cplx LoewnerFlow::forward_between(double t1, double t2, cplx z) const {
  return advance(driving_, z, t1, t2, forward_step);
}

cplx LoewnerFlow::reverse_map(double t, cplx z) const {
  return advance(driving_, z + driving_.values.front(), 0.0, t, reverse_step) - driving_.at(t);
}

cplx LoewnerFlow::reverse_inverse(double t, cplx w) const {
  const auto& ts = driving_.times;
  require(t >= 0.0 && t <= ts.back() * (1 + 1e-13), "reverse_inverse: time outside horizon");
  cplx z = w + driving_.at(t);
  std::size_t k = std::min(step_of(t), ts.size() - 1);
  double hi = t;
  while (true) {
    const double d = hi - ts[k];
    if (d > 0.0) z = forward_step(z, driving_.values[k], d);
    if (k == 0) break;
    hi = ts[k];
    --k;
  }
  return z - driving_.values.front();
}

cplx LoewnerFlow::forward_inverse(double t, cplx w) const {
  const auto& ts = driving_.times;
  require(t >= 0.0 && t <= ts.back() * (1 + 1e-13), "forward_inverse: time outside horizon");
  std::size_t k = std::min(step_of(t), ts.size() - 1);
  double hi = t;
  cplx z = w;
  while (true) {
    const double d = hi - ts[k];
    if (d > 0.0) z = reverse_step(z, driving_.values[k], d);
    if (k == 0) break;
    hi = ts[k];
    --k;
  }
  return z;
}

double LoewnerFlow::swallow_time(double x) const {
  if (x == 0.0) return 0.0;
  const auto& ts = driving_.times;
  const auto& W = driving_.values;
  double c = x - W.front();
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double d = ts[k + 1] - ts[k];
    const double c2 = c * c;
    if (c2 <= 4.0 * d) return ts[k] + 0.25 * c2;
    const double s = sgn(c);
    c = s * std::sqrt(c2 - 4.0 * d);
    const double next = c - (W[k + 1] - W[k]);
    if (next == 0.0 || sgn(next) != s) return ts[k + 1];
    c = next;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<double> LoewnerFlow::swallow_times(const std::vector<double>& xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = swallow_time(xs[i]);
  return out;
}

std::vector<cplx> LoewnerFlow::reverse_trajectories(const std::vector<cplx>& zs,
                                                    const std::vector<double>& mesh_times) const {
  std::vector<cplx> out(zs.size() * mesh_times.size());
  std::vector<cplx> cur(zs);
  for (auto& z : cur) z += driving_.values.front();
  double t = 0.0;
  for (std::size_t m = 0; m < mesh_times.size(); ++m) {
    require(mesh_times[m] >= t, "reverse_trajectories: mesh times must be sorted");
    for (auto& z : cur) z = advance(driving_, z, t, mesh_times[m], reverse_step);
    t = mesh_times[m];
    const double Wt = driving_.at(t);
    for (std::size_t j = 0; j < zs.size(); ++j) out[m * zs.size() + j] = cur[j] - Wt;
  }
  return out;
}

std::vector<cplx> LoewnerFlow::trace(std::size_t every) const {
  require(every >= 1, "trace: stride must be >= 1");
  std::vector<cplx> tips{cplx(0.0, 0.0)};
  const auto& ts = driving_.times;
  for (std::size_t k = every; k < ts.size(); k += every)
    tips.push_back(forward_inverse(ts[k], cplx(driving_.values[k - 1], 0.0)));
  return tips;
}

double caratheodory_plus_distance(const LoewnerFlow& a, const LoewnerFlow& b, double T, double eps,
                                  double K, const CaratheodoryMesh& mesh) {
  require(T > 0.0 && eps > 0.0 && K > 0.0, "caratheodory_plus_distance: need T, eps, K > 0");
  require(mesh.time_points >= 2 && mesh.space_points >= 2 && mesh.swallow_points >= 2,
          "caratheodory_plus_distance: meshes need >= 2 points");
  std::vector<double> ts(mesh.time_points);
  for (std::size_t m = 0; m < ts.size(); ++m) ts[m] = T * static_cast<double>(m) / (ts.size() - 1);
  std::vector<cplx> zs(mesh.space_points);
  for (std::size_t j = 0; j < zs.size(); ++j)
    zs[j] = cplx(-K + 2.0 * K * static_cast<double>(j) / (zs.size() - 1), eps);
  const auto fa = a.reverse_trajectories(zs, ts);
  const auto fb = b.reverse_trajectories(zs, ts);
  double d = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) d = std::max(d, std::abs(fa[i] - fb[i]));
  const double H = std::min(a.driving().horizon(), b.driving().horizon());
  for (std::size_t l = 0; l < mesh.swallow_points; ++l) {
    const double x = -K + 2.0 * K * static_cast<double>(l) / (mesh.swallow_points - 1);
    const double sa = std::min(a.swallow_time(x), H), sb = std::min(b.swallow_time(x), H);
    if (std::min(sa, sb) <= T) d = std::max(d, std::fabs(sa - sb));
  }
  return d;
}

// ---------------------------------------------------------------- slit maps

cplx SlitMap::tip() const {
  return std::polar(std::pow(p, b()) * std::pow(q, a()), kPi * b());
}

cplx SlitMap::operator()(cplx z) const {
  if (z.imag() < 0.0) z = {z.real(), 0.0};
  return std::exp(a() * clog_upper(z + q) + b() * clog_upper(z - p));
}

cplx SlitMap::derivative(cplx z) const {
  return (*this)(z) * (a() / (z + q) + b() / (z - p));
}

double SlitMap::inverse_real(double w) const {
  require(w != 0.0, "SlitMap::inverse_real: 0 has two preimages");
  // Work with y on (lo_base, inf) where phi(y) = A log(y - c1) + B log(y + c2) increases.
  const double target = std::log(std::fabs(w));
  double A, B, c1, c2, lo, hi;
  if (w > 0.0) {  // x = y > p
    A = b(); B = a(); c1 = p; c2 = q;
    lo = std::max(p, w - shift());
    hi = w + p;
  } else {  // x = -y < -q
    A = a(); B = b(); c1 = q; c2 = p;
    lo = std::max(q, -w + shift());
    hi = -w + q;
  }
  auto phi = [&](double y) { return A * std::log(y - c1) + B * std::log(y + c2) - target; };
  auto dphi = [&](double y) { return A / (y - c1) + B / (y + c2); };
  lo = std::max(lo, c1);
  double y = 0.5 * (lo + hi);
  if (lo == c1) lo = std::nextafter(c1, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = phi(y);
    if (f > 0.0) hi = std::min(hi, y);
    else lo = std::max(lo, y);
    double ny = y - f / dphi(y);
    if (!(ny > lo && ny < hi)) ny = 0.5 * (lo + hi);
    if (std::fabs(ny - y) <= 1e-15 * std::max(1.0, std::fabs(y))) {
      y = ny;
      break;
    }
    y = ny;
  }
  return w > 0.0 ? y : -y;
}

cplx SlitMap::inverse(cplx w) const {
  if (!(w.imag() > 0.0)) return {inverse_real(w.real()), 0.0};
  const cplx target = clog_upper(w);
  const cplx t0 = tip();
  const double scale = p + q;
  auto G = [&](cplx z) { return a() * clog_upper(z + q) + b() * clog_upper(z - p) - target; };
  auto dG = [&](cplx z) { return a() / (z + q) + b() / (z - p); };
  auto newton = [&](cplx z) {
    if (z.imag() <= 0.0) z = {z.real(), 1e-300};
    double res = std::abs(G(z));
    for (int it = 0; it < 100 && res > 1e-15; ++it) {
      const cplx step = G(z) / dG(z);
      double lambda = 1.0;
      cplx nz;
      double nres;
      do {
        nz = z - lambda * step;
        if (nz.imag() <= 0.0) nz = {nz.real(), 0.5 * z.imag()};
        nres = std::abs(G(nz));
        lambda *= 0.5;
      } while (nres > res && lambda > 1e-6);
      const bool stalled = std::abs(nz - z) <= 1e-16 * std::max(1.0, std::abs(z));
      z = nz;
      res = nres;
      if (stalled) break;
    }
    // Near p or -q the residual cannot drop below the rounding of z + q and z - p.
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * scale *
                         (a() / std::abs(z + q) + b() / std::abs(z - p));
    return std::pair<cplx, bool>(z, res < 1e-10 + floor);
  };

  std::vector<cplx> starts;
  if (std::abs(w - t0) < 0.5 * std::abs(t0)) {
    const cplx f2 = t0 * (-a() / (q * q) - b() / (p * p));
    starts.push_back(sqrt_upper(2.0 * (w - t0) / f2, 1.0));
  }
  if (std::abs(w) < 0.1 * std::abs(t0)) {
    // Near the base: invert the local power law at p or at -q.
    const double phi = std::arg(w);
    if (phi < kPi * b())
      starts.push_back(p + std::pow(std::abs(w) / std::pow(scale, a()), 1.0 / b()) * std::exp(cplx(0.0, phi / b())));
    else
      starts.push_back(-q + std::pow(std::abs(w) / std::pow(scale, b()), 1.0 / a()) *
                                std::exp(cplx(0.0, (phi - kPi * b()) / a())));
  }
  if (w.real() != 0.0) {
    const double x = inverse_real(w.real());
    starts.emplace_back(x, w.imag() / std::abs(derivative(x)));
  }
  starts.push_back(w - shift() + cplx(0.0, 1e-3 * scale));
  for (cplx z0 : starts) {
    const auto [z, ok] = newton(z0);
    if (ok) return z;
  }
  throw NumericFailure("SlitMap::inverse: Newton iteration did not converge");
}

SlitMap SlitMap::from_tip(cplx w) {
  const double b = std::arg(w) / kPi;
  if (!(w.imag() > 0.0) || b <= 0.0 || b >= 1.0)
    throw InvalidCurve("slit tip must lie in the open upper half-plane");
  const double a = 1.0 - b;
  const double S = std::abs(w) / (std::pow(b, b) * std::pow(a, a));
  return SlitMap{b * S, a * S};
}

// ---------------------------------------------------------------- extraction

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

void validate_curve(const std::vector<cplx>& c) {
  if (c.size() < 2) throw InvalidCurve("curve needs at least two vertices");
  if (std::abs(c[0]) > 1e-12) throw InvalidCurve("curve must start at 0");
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (!(c[k].imag() > 0.0)) throw InvalidCurve("curve touches the boundary");
    if (c[k] == c[k - 1]) throw InvalidCurve("curve has repeated vertices");
  }
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xmin = std::min(c[i].real(), c[i + 1].real()), xmax = std::max(c[i].real(), c[i + 1].real());
    const double ymin = std::min(c[i].imag(), c[i + 1].imag()), ymax = std::max(c[i].imag(), c[i + 1].imag());
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (std::max(c[j].real(), c[j + 1].real()) < xmin || std::min(c[j].real(), c[j + 1].real()) > xmax ||
          std::max(c[j].imag(), c[j + 1].imag()) < ymin || std::min(c[j].imag(), c[j + 1].imag()) > ymax)
        continue;
      if (segments_intersect(c[i], c[i + 1], c[j], c[j + 1]))
        throw InvalidCurve("curve self-intersects");
    }
  }
}

DrivingFunction extract_driving(const std::vector<cplx>& curve) {
  validate_curve(curve);
  std::vector<cplx> w(curve.begin() + 1, curve.end());
  DrivingFunction d;
  d.scheme = "tilted-slit zipper";
  d.times.push_back(0.0);
  d.values.push_back(0.0);
  double t = 0.0, W = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const SlitMap s = SlitMap::from_tip(w[k]);
    for (std::size_t j = k + 1; j < w.size(); ++j) {
      w[j] = s.inverse(w[j]);
      if (!(w[j].imag() > 0.0)) throw InvalidCurve("curve touches itself or the boundary");
    }
    t += s.capacity_time();
    W += s.shift();
    d.times.push_back(t);
    d.values.push_back(W);
  }
  return d;
}

void write_csv(const DrivingFunction& d, std::ostream& os) {
  os << "# scheme=" << d.scheme << " kappa=" << fmt(d.kappa) << " steps=" << d.steps() << "\n";
  os << "time,W\n";
  for (std::size_t k = 0; k < d.times.size(); ++k) os << fmt(d.times[k]) << ',' << fmt(d.values[k]) << '\n';
}

void write_curve_csv(const std::vector<cplx>& curve, std::ostream& os) {
  os << "re,im\n";
  for (const auto& z : curve) os << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
}

}  // namespace weldlab
