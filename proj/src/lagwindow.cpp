#include "lrv/lagwindow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "lrv/convolution.hpp"

namespace lrv {

ScalarSeries::ScalarSeries(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("series contains a non-finite value");
  }
}

double ScalarSeries::mean() const noexcept {
  if (values_.empty()) return 0.0;
  const double n = static_cast<double>(values_.size());
  double sum = 0.0;
  for (double v : values_) sum += v;
  double m = sum / n;
  double correction = 0.0;
  for (double v : values_) correction += v - m;
  return m + correction / n;
}

std::vector<double> ScalarSeries::centered() const {
  const double m = mean();
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [m](double v) { return v - m; });
  return out;
}

BandwidthRule BandwidthRule::classical(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  return {false, delta};
}

BandwidthRule BandwidthRule::fixed_b(double b) {
  if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("fixed-b parameter must lie in (0, 1]");
  return {true, b};
}

BandwidthRule BandwidthRule::parse(std::string_view text, double b) {
  if (text == "fixedb") return fixed_b(b);
  constexpr std::string_view prefix = "delta:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string number(text.substr(prefix.size()));
    std::size_t used = 0;
    double delta = 0.0;
    try {
      delta = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) {
      throw std::invalid_argument("malformed bandwidth rule: " + std::string(text));
    }
    return classical(delta);
  }
  throw std::invalid_argument("bandwidth rule must be delta:<d> or fixedb, got " + std::string(text));
}

double BandwidthRule::bandwidth(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("bandwidth needs n >= 1");
  const double dn = static_cast<double>(n);
  return fixed_b_ ? dn : std::pow(dn, param_);
}

namespace kernels {

std::vector<double> autocovariances_serial(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  std::vector<double> gamma(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j + k < n; ++j) acc += x[j] * x[j + k];
    gamma[k] = acc / static_cast<double>(n);
  }
  return gamma;
}

std::vector<double> autocovariances_parallel(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  const std::size_t lags = std::min(max_lag + 1, n);
  std::vector<double> gamma(max_lag + 1, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(lags);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t kk = 0; kk < count; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    double acc = 0.0;
    for (std::size_t j = 0; j + k < n; ++j) acc += x[j] * x[j + k];
    gamma[k] = acc / static_cast<double>(n);
  }
  return gamma;
}

std::vector<double> autocovariances_fft(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  std::vector<double> gamma(max_lag + 1, 0.0);
  if (n == 0) return gamma;
  std::size_t len = 2;
  while (len < n + std::min(max_lag, n) + 1) len <<= 1;

  std::vector<double> padded(len, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  thread_local Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, padded);
  for (auto& c : spectrum) c = std::norm(c);
  std::vector<double> corr;
  fft.inv(corr, spectrum);
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) gamma[k] = corr[k] / static_cast<double>(n);
  return gamma;
}

}  // namespace kernels

double autocovariance(const ScalarSeries& s, std::size_t k) {
  if (s.size() == 0 || k >= s.size()) throw std::out_of_range("autocovariance lag out of range");
  const auto x = s.centered();
  double acc = 0.0;
  for (std::size_t j = 0; j + k < x.size(); ++j) acc += x[j] * x[j + k];
  return acc / static_cast<double>(x.size());
}

std::vector<double> autocovariances(const ScalarSeries& s, std::size_t max_lag) {
  if (s.size() == 0 || max_lag >= s.size()) {
    throw std::out_of_range("autocovariances: max_lag must be below the series length");
  }
  const auto x = s.centered();
  // Roughly where a padded FFT pair becomes cheaper than the direct lag sums.
  constexpr double kDirectBudget = 5.0e5;
  const double work = static_cast<double>(x.size()) * static_cast<double>(max_lag + 1);
  if (work <= kDirectBudget) return kernels::autocovariances_parallel(x, max_lag);
  return kernels::autocovariances_fft(x, max_lag);
}

std::size_t last_active_lag(const Window& w, double c_n, std::size_t n) {
  if (!(c_n > 0.0)) throw std::invalid_argument("bandwidth c_n must be positive");
  if (n < 2) return 0;
  const LagRange range = lag_range(WindowPiece{0.0, w.b(), {}}, c_n, n - 1);
  return range.empty() ? 0 : range.last;
}

double lag_weight(const Window& w, double c_n, std::size_t n, std::ptrdiff_t k) noexcept {
  const double inv_n = 1.0 / static_cast<double>(n);
  if (k < 0) return 0.0;
  if (k == 0) return inv_n;
  return 2.0 * inv_n * w(static_cast<double>(k) / c_n);
}

namespace {

void check_estimator_args(std::size_t n, double c_n) {
  if (n < 2) throw std::invalid_argument("lag-window estimator needs n >= 2");
  if (!(c_n > 0.0) || !std::isfinite(c_n)) throw std::invalid_argument("c_n must be positive");
}

}  // namespace

LagWindowEstimate lag_window_from_autocovariances(std::span<const double> gamma, std::size_t n,
                                                  const Window& w, double c_n) {
  check_estimator_args(n, c_n);
  const std::size_t last = last_active_lag(w, c_n, n);
  if (gamma.size() <= last) throw std::invalid_argument("not enough autocovariances for window");
  double tail = 0.0;
  for (std::size_t k = 1; k <= last; ++k) tail += w(static_cast<double>(k) / c_n) * gamma[k];
  return {gamma[0] + 2.0 * tail, c_n, w, gamma[0], n};
}

LagWindowEstimate lag_window_estimate(const ScalarSeries& s, const Window& w, double c_n) {
  check_estimator_args(s.size(), c_n);
  const std::size_t last = last_active_lag(w, c_n, s.size());
  const auto gamma = autocovariances(s, last);
  return lag_window_from_autocovariances(gamma, s.size(), w, c_n);
}

double remainder_rn(const ScalarSeries& s, const Window& w, double c_n) {
  check_estimator_args(s.size(), c_n);
  const auto h = s.values();
  const std::size_t n = h.size();
  const double dn = static_cast<double>(n);
  const std::size_t last = last_active_lag(w, c_n, n);

  // cumulative[m] = sum_{k=1}^{m} w_b(k / c_n)
  std::vector<double> cumulative(n, 0.0);
  double tapered = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    const double wm = m <= last ? w(static_cast<double>(m) / c_n) : 0.0;
    cumulative[m] = cumulative[m - 1] + wm;
    tapered += wm * (1.0 - static_cast<double>(m) / dn);
  }

  double total = 0.0;
  for (double v : h) total += v;
  double cross = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    double both = 0.0;
    if (j >= 2) both += cumulative[j - 1];
    if (j <= n - 1) both += cumulative[n - j];
    cross += h[j - 1] * both;
  }
  const double inv_n2 = 1.0 / (dn * dn);
  return 2.0 * inv_n2 * total * total * tapered - 2.0 * inv_n2 * total * cross -
         inv_n2 * total * total;
}

QuadraticForm quadratic_form_value(const ScalarSeries& s, const Window& w, double c_n) {
  check_estimator_args(s.size(), c_n);
  const auto h = s.values();
  const std::size_t n = h.size();
  const double dn = static_cast<double>(n);
  const std::size_t last = last_active_lag(w, c_n, n);

  std::vector<double> weight(last + 1, 0.0);  // w_b(k / c_n)
  for (std::size_t k = 1; k <= last; ++k) weight[k] = w(static_cast<double>(k) / c_n);

  double quad = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t j0 = l > last ? l - last : 0;
    double inner = 0.0;
    for (std::size_t j = j0; j < l; ++j) inner += weight[l - j] * h[j];
    quad += h[l] * (h[l] / dn + 2.0 * inner / dn);
  }
  return {quad, remainder_rn(s, w, c_n)};
}

}  // namespace lrv
