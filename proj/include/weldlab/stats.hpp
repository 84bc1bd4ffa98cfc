#pragma once

#include <functional>
#include <vector>

namespace weldlab {

struct KsResult {
  double D = 0.0;
  double p = 1.0;
  double n_eff = 0.0;
};

struct TrendResult {
  double slope = 0.0;
  double decrease_fraction = 0.0;
};

// Kolmogorov survival function P(K > lambda).
double kolmogorov_q(double lambda);

// One-sample test with Stephens' small-sample correction of the asymptotic law.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
// Weighted one-sample test; the effective sample size replaces n.
KsResult ks_test_weighted(const std::vector<double>& samples, const std::vector<double>& weights,
                          const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_two_sample_weighted(const std::vector<double>& a, const std::vector<double>& wa,
                                const std::vector<double>& b, const std::vector<double>& wb);

// Least-squares slope against the ladder index and fraction of adjacent decreases.
TrendResult trend_test(const std::vector<double>& values);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double standard_error(const std::vector<double>& v);
double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);
double effective_sample_size(const std::vector<double>& w);
double weighted_mean(const std::vector<double>& x, const std::vector<double>& w);
double weighted_variance(const std::vector<double>& x, const std::vector<double>& w);
// Least-squares slope of y on x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y,
                        double* intercept = nullptr);

double normal_cdf(double x);

}  // namespace weldlab
