#include "weldlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weldlab/errors.hpp"

namespace weldlab {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double corrected_p(double D, double n) {
  const double rn = std::sqrt(n);
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * D);
}

// Sup distance between two weighted step CDFs.
double weighted_sup(const std::vector<double>& a, const std::vector<double>& wa,
                    const std::vector<double>& b, const std::vector<double>& wb) {
  std::vector<std::size_t> ia(a.size()), ib(b.size());
  std::iota(ia.begin(), ia.end(), 0);
  std::iota(ib.begin(), ib.end(), 0);
  std::sort(ia.begin(), ia.end(), [&](auto i, auto j) { return a[i] < a[j]; });
  std::sort(ib.begin(), ib.end(), [&](auto i, auto j) { return b[i] < b[j]; });
  const double sa = std::accumulate(wa.begin(), wa.end(), 0.0);
  const double sb = std::accumulate(wb.begin(), wb.end(), 0.0);
  double fa = 0.0, fb = 0.0, D = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ia.size() || j < ib.size()) {
    double x;
    if (j >= ib.size() || (i < ia.size() && a[ia[i]] <= b[ib[j]])) x = a[ia[i]];
    else x = b[ib[j]];
    while (i < ia.size() && a[ia[i]] == x) fa += wa[ia[i++]] / sa;
    while (j < ib.size() && b[ib[j]] == x) fb += wb[ib[j++]] / sb;
    D = std::max(D, std::fabs(fa - fb));
  }
  return D;
}

}  // namespace

KsResult ks_test(std::vector<double> s, const std::function<double(double)>& cdf) {
  require(s.size() >= 20, "ks_test: need at least 20 samples");
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double D = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double F = cdf(s[i]);
    D = std::max({D, (i + 1) / n - F, F - i / n});
  }
  return {D, corrected_p(D, n), n};
}

KsResult ks_test_weighted(const std::vector<double>& x, const std::vector<double>& w,
                          const std::function<double(double)>& cdf) {
  require(x.size() == w.size() && x.size() >= 20, "ks_test_weighted: need >= 20 samples");
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  require(total > 0.0, "ks_test_weighted: weights sum to zero");
  double acc = 0.0, D = 0.0;
  for (std::size_t k = 0; k < idx.size();) {
    const double v = x[idx[k]];
    const double before = acc;
    while (k < idx.size() && x[idx[k]] == v) acc += w[idx[k++]] / total;
    const double F = cdf(v);
    D = std::max({D, acc - F, F - before});
  }
  const double ne = effective_sample_size(w);
  return {D, corrected_p(D, ne), ne};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(a.size() >= 20 && b.size() >= 20, "ks_two_sample: need at least 20 samples each");
  std::vector<double> wa(a.size(), 1.0), wb(b.size(), 1.0);
  const double D = weighted_sup(a, wa, b, wb);
  const double n = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  return {D, corrected_p(D, n), n};
}

KsResult ks_two_sample_weighted(const std::vector<double>& a, const std::vector<double>& wa,
                                const std::vector<double>& b, const std::vector<double>& wb) {
  require(a.size() == wa.size() && b.size() == wb.size(), "ks_two_sample_weighted: size mismatch");
  const double D = weighted_sup(a, wa, b, wb);
  const double na = effective_sample_size(wa), nb = effective_sample_size(wb);
  require(na >= 20 && nb >= 20, "ks_two_sample_weighted: effective sample size below 20");
  const double n = na * nb / (na + nb);
  return {D, corrected_p(D, n), n};
}

TrendResult trend_test(const std::vector<double>& v) {
  require(v.size() >= 3, "trend_test: ladder length must be >= 3");
  std::vector<double> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0.0);
  TrendResult r;
  r.slope = regression_slope(idx, v);
  std::size_t dec = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) ++dec;
  r.decrease_fraction = static_cast<double>(dec) / static_cast<double>(v.size() - 1);
  return r;
}

double mean(const std::vector<double>& v) {
  require(!v.empty(), "mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  require(v.size() >= 2, "variance needs two samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double standard_error(const std::vector<double>& v) {
  return std::sqrt(variance(v) / static_cast<double>(v.size()));
}

double quantile(std::vector<double> v, double q) {
  require(!v.empty(), "quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double effective_sample_size(const std::vector<double>& w) {
  double s = 0.0, s2 = 0.0;
  for (double x : w) {
    s += x;
    s2 += x * x;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

double weighted_mean(const std::vector<double>& x, const std::vector<double>& w) {
  double s = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * x[i];
    sw += w[i];
  }
  require(sw > 0.0, "weighted_mean: weights sum to zero");
  return s / sw;
}

double weighted_variance(const std::vector<double>& x, const std::vector<double>& w) {
  const double m = weighted_mean(x, w);
  double s = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * (x[i] - m) * (x[i] - m);
    sw += w[i];
  }
  return s / sw;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y,
                        double* intercept) {
  require(x.size() == y.size() && x.size() >= 2, "regression_slope: bad sizes");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double b = sxx > 0.0 ? sxy / sxx : 0.0;
  if (intercept) *intercept = my - b * mx;
  return b;
}

}  // namespace weldlab
