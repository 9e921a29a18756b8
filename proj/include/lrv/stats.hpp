#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lrv {

double normal_cdf(double x) noexcept;

/// Inverse standard normal CDF, absolute error below 1e-9 on (0, 1).
/// Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

struct KsResult {
  double statistic;
  double p_value;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda) noexcept;

/// One-sample KS test of `sample` against a continuous CDF.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS test.
KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

/// Upper order statistic: sorted[ceil(p * n) - 1] (no interpolation). `sorted` must be ascending.
double order_statistic_quantile(std::span<const double> sorted, double p);

double median(std::vector<double> values);
double mean(std::span<const double> values) noexcept;
double sample_variance(std::span<const double> values) noexcept;

/// Bootstrap standard error of order_statistic_quantile(., p).
double bootstrap_quantile_se(std::span<const double> sorted, double p, int resamples,
                             std::uint64_t seed);

}  // namespace lrv
