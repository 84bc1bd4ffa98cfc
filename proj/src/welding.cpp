#include "weldlab/welding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "weldlab/errors.hpp"

namespace weldlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Real boundary action of a slit map outside the welded segment [-q, p].
double slit_real(const SlitMap& s, double x) {
  if (x >= s.p) return std::pow(x + s.q, s.a()) * std::pow(x - s.p, s.b());
  if (x <= -s.q) return -std::pow(-x - s.q, s.a()) * std::pow(s.p - x, s.b());
  throw InvalidArgument("slit map: real point inside the welded segment");
}

double slit_real_derivative(const SlitMap& s, double x) {
  return std::fabs(slit_real(s, x) * (s.a() / (x + s.q) + s.b() / (x - s.p)));
}

double point_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  double u = L2 > 0.0 ? ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / L2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::abs(p - (a + u * d));
}

}  // namespace

void Correspondence::validate() const {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& c = pairs[k];
    if (!(c.x > 0.0 && c.y < 0.0 && c.q > 0.0))
      throw InvalidArgument("correspondence: need x > 0, y < 0, q > 0");
    if (k > 0) {
      const auto& b = pairs[k - 1];
      if (!(c.x > b.x && c.y < b.y && c.q > b.q))
        throw InvalidArgument("correspondence: pairs must be strictly monotone");
    }
  }
}

void Correspondence::write_csv(std::ostream& os) const {
  os << "# source=" << source << "\nx,y,q\n";
  for (const auto& c : pairs) os << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(c.q) << '\n';
}

std::vector<double> quantum_grid(double t, double per_unit) {
  require(t >= 0.0 && per_unit > 0.0, "quantum_grid: need t >= 0 and per_unit > 0");
  std::vector<double> g;
  for (std::size_t k = 1;; ++k) {
    const double q = static_cast<double>(k) / per_unit;
    if (q > t * (1.0 + 1e-12)) break;
    g.push_back(std::min(q, t));
  }
  if (t > 0.0 && (g.empty() || g.back() < t)) g.push_back(t);
  return g;
}

Correspondence quantum_correspondence(const BoundaryMeasure& right, const BoundaryMeasure& left,
                                      const std::vector<double>& q_grid) {
  if (!right.is_nonnegative() || !left.is_nonnegative() || right.kind() == MeasureKind::critical ||
      left.kind() == MeasureKind::critical)
    throw InvalidArgument("quantum_correspondence: measures must be non-negative");
  Correspondence c;
  c.source = to_string(right.kind()) + "|" + to_string(left.kind());
  const double Fr = right.cumulative(0.0), Fl = left.cumulative(0.0);
  double qmax = 0.0;
  for (double q : q_grid) qmax = std::max(qmax, q);
  if (qmax > right.total() - Fr || qmax > Fl)
    throw OutOfRange("quantum_correspondence: one-sided mass below the largest q");
  for (double q : q_grid) {
    if (q <= 0.0) continue;
    c.pairs.push_back({right.quantile(Fr + q), left.upper_quantile(Fl - q), q});
  }
  c.validate();
  return c;
}

SlitMap elementary_weld(double p, double q) {
  require(p > 0.0 && q > 0.0, "elementary_weld: p and q must be positive");
  return SlitMap{p, q};
}

// ---------------------------------------------------------------- interface

cplx WeldedInterface::map(cplx z) const {
  for (const auto& s : maps) z = s(z);
  return z;
}

double WeldedInterface::map_real(double x) const {
  for (const auto& s : maps) x = slit_real(s, x);
  return x;
}

cplx WeldedInterface::inverse(cplx w) const {
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) w = it->inverse(w);
  return w;
}

std::pair<double, double> WeldedInterface::inverse_real(double y) const {
  double x = y, D = 1.0;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    const double prev = it->inverse_real(x);
    D /= slit_real_derivative(*it, prev);
    x = prev;
  }
  return {x, D};
}

DrivingFunction WeldedInterface::driving() const {
  DrivingFunction d;
  d.scheme = "tilted-slit weld";
  d.times.push_back(0.0);
  d.values.push_back(0.0);
  double t = 0.0, W = 0.0;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    t += it->capacity_time();
    W += it->shift();
    d.times.push_back(t);
    d.values.push_back(W);
  }
  return d;
}

double WeldedInterface::simplicity_ratio() const {
  const std::size_t n = curve.size();
  double maxstep = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) maxstep = std::max(maxstep, std::abs(curve[i + 1] - curve[i]));
  double mind = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      const double d = std::min({point_segment(curve[i], curve[j], curve[j + 1]),
                                 point_segment(curve[i + 1], curve[j], curve[j + 1]),
                                 point_segment(curve[j], curve[i], curve[i + 1]),
                                 point_segment(curve[j + 1], curve[i], curve[i + 1])});
      mind = std::min(mind, d);
    }
  return maxstep > 0.0 ? mind / maxstep : std::numeric_limits<double>::infinity();
}

WeldedInterface build_welding_curve(const Correspondence& corr) {
  corr.validate();
  require(!corr.pairs.empty(), "build_welding_curve: empty correspondence");
  const std::size_t n = corr.pairs.size();
  std::vector<double> px(n), py(n);
  for (std::size_t k = 0; k < n; ++k) {
    px[k] = corr.pairs[k].x;
    py[k] = corr.pairs[k].y;
  }
  WeldedInterface wi;
  std::vector<cplx> pts{cplx(0.0, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    const double p = px[k], q = -py[k];
    if (p < 1e-12 || q < 1e-12)
      throw DegenerateCorrespondence("build_welding_curve: welded images collided");
    const SlitMap s = elementary_weld(p, q);
    std::vector<cplx> next;
    next.reserve(pts.size() + 1);
    next.emplace_back(0.0, 0.0);
    for (const auto& v : pts) next.push_back(s(v));
    pts.swap(next);
    for (std::size_t j = k + 1; j < n; ++j) {
      px[j] = slit_real(s, px[j]);
      py[j] = slit_real(s, py[j]);
    }
    wi.maps.push_back(s);
    wi.total_shift += s.shift();
  }
  wi.curve = std::move(pts);
  return wi;
}

// ---------------------------------------------------------------- push-forward

CoordinateMap scaling_map(double r) {
  require(r > 0.0, "scaling_map: r must be positive");
  return {[r](double y) { return std::pair<cplx, double>(cplx(r * y, 0.0), r); }};
}

BoundaryFieldGrid push_field(const BoundaryFieldGrid& field, const CoordinateMap& psi, double Q,
                             const std::vector<double>& new_xs) {
  const std::size_t n = new_xs.size(), L = field.num_scales();
  std::vector<double> values(n * L);
  const double lo = field.xs().front(), hi = field.xs().back();
  const double tol = 1e-12 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [z, D] = psi.eval(new_xs[i]);
    if (!(z.real() >= lo - tol && z.real() <= hi + tol) || !(D > 0.0) || !std::isfinite(D))
      throw InvalidArgument("push_field: map leaves the field window at y = " + fmt(new_xs[i]));
    const double logD = std::log(D);
    for (std::size_t k = 0; k < L; ++k)
      values[k * n + i] = field.bulk_value(z, field.scale(k) * D) + Q * logD;
  }
  return BoundaryFieldGrid(new_xs, field.levels(), std::move(values), field.model() + "+pushed");
}

SideLengths side_lengths(const BoundaryFieldGrid& field, const DrivingFunction& eta, double t,
                         double eps, double beta, std::size_t points) {
  return side_lengths(field, eta, t, std::vector<double>{eps}, beta, points).front();
}

std::vector<SideLengths> side_lengths(const BoundaryFieldGrid& field, const DrivingFunction& eta,
                                      double t, const std::vector<double>& eps, double beta,
                                      std::size_t points) {
  if (t == 0.0) return std::vector<SideLengths>(eps.size());
  require(t > 0.0 && t <= eta.horizon() * (1.0 + 1e-12), "side_lengths: t outside the driving range");
  SideLengths out;
  const auto& ts = eta.times;
  const auto& Ws = eta.values;
  // The slit grown last sits at the left-endpoint driving value of its step.
  const std::size_t last =
      static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
  const double Wt = Ws[last];
  // Image of the hull's real trace. Piecewise-constant driving can jump past the image of
  // the base, so the interval is widened to contain each new slit before it grows.
  {
    double a = Ws.front(), b = Ws.front();
    for (std::size_t k = 0; k + 1 < ts.size() && ts[k] < t; ++k) {
      const double d = std::min(ts[k + 1], t) - ts[k];
      const double W = Ws[k];
      a = std::min(a, W);
      b = std::max(b, W);
      a = W - std::sqrt((W - a) * (W - a) + 4.0 * d);
      b = W + std::sqrt((b - W) * (b - W) + 4.0 * d);
    }
    out.x_plus = b - Wt;
    out.x_minus = a - Wt;
  }
  // g~_t^{-1}(y + W_t) and its derivative, stepping the reverse slit maps back to 0.
  auto invert = [&](double y, double* D) {
    cplx z(y + Wt, 0.0);
    double deriv = 1.0;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
    double top = t;
    while (true) {
      const double d = top - ts[k];
      if (d > 0.0) {
        const cplx u = z - Ws[k];
        cplx s;
        if (u.imag() == 0.0) {
          const double c2 = u.real() * u.real() - 4.0 * d;
          s = c2 > 0.0 ? cplx((u.real() < 0 ? -1.0 : 1.0) * std::sqrt(c2), 0.0) : cplx(0.0, std::sqrt(-c2));
        } else {
          s = sqrt_upper(u * u - 4.0 * d, u.real() < 0 ? -1.0 : 1.0);
        }
        deriv *= std::abs(u) / std::abs(s);
        z = Ws[k] + s;
      }
      if (k == 0) break;
      top = ts[k];
      --k;
    }
    *D = deriv;
    return z;
  };
  CoordinateMap psi{[&](double y) {
    double D;
    const cplx z = invert(y, &D);
    return std::pair<cplx, double>(z, D);
  }};
  const auto grid = standard_grid(points, out.x_minus, out.x_plus);
  const BoundaryFieldGrid pushed = push_field(field, psi, 2.0, grid);
  std::vector<SideLengths> all;
  for (double e : eps) {
    const BoundaryMeasure m = truncated_derivative_measure(pushed, beta, e);
    out.left = m.mass(out.x_minus, 0.0);
    out.right = m.mass(0.0, out.x_plus);
    all.push_back(out);
  }
  return all;
}

ZipResult zip_up(const BoundaryFieldGrid& field, const std::vector<cplx>& existing_curve, double t,
                 double eps, double beta, double pairs_per_unit) {
  ZipResult out;
  if (t == 0.0) {
    out.field = field;
    out.interface = existing_curve;
    return out;
  }
  require(t > 0.0, "zip_up: quantum time must be non-negative");
  const BoundaryMeasure m = truncated_derivative_measure(field, beta, eps);
  out.correspondence = quantum_correspondence(m, m, quantum_grid(t, pairs_per_unit));
  out.seam = build_welding_curve(out.correspondence);
  out.X = out.correspondence.pairs.back().x;
  out.Y = out.correspondence.pairs.back().y;

  const double right = out.seam.map_real(field.xs().back());
  const double left = out.seam.map_real(field.xs().front());
  const double half = std::min(right, -left) * (1.0 - 1e-9);
  require(half > 0.0, "zip_up: empty target window");
  const auto grid = standard_grid(field.size(), -half, half);
  const WeldedInterface& seam = out.seam;
  CoordinateMap psi{[&seam](double y) {
    const auto [x, D] = seam.inverse_real(y);
    return std::pair<cplx, double>(cplx(x, 0.0), D);
  }};
  out.field = push_field(field, psi, 2.0, grid);

  out.interface = out.seam.curve;
  for (std::size_t i = 1; i < existing_curve.size(); ++i)
    out.interface.push_back(out.seam.map(existing_curve[i]));
  return out;
}

}  // namespace weldlab
