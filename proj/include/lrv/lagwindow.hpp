#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lrv/windows.hpp"

namespace lrv {

/// Observed path h(X_1), ..., h(X_n). All values are finite.
class ScalarSeries {
 public:
  explicit ScalarSeries(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Sample mean with one correction pass; a constant series centers to exact zeros.
  double mean() const noexcept;
  std::vector<double> centered() const;

 private:
  std::vector<double> values_;
};

/// Bandwidth sequence c_n: classical c_n = n^delta, or fixed-b c_n = n with window parameter b.
class BandwidthRule {
 public:
  static BandwidthRule classical(double delta);
  static BandwidthRule fixed_b(double b);
  /// "delta:<d>" or "fixedb" (the fixed-b window parameter then comes from `b`).
  static BandwidthRule parse(std::string_view text, double b);

  bool is_fixed_b() const noexcept { return fixed_b_; }
  /// delta for classical rules, b for fixed-b rules.
  double parameter() const noexcept { return param_; }
  double bandwidth(std::size_t n) const;

 private:
  BandwidthRule(bool fixed_b, double param) : fixed_b_(fixed_b), param_(param) {}
  bool fixed_b_;
  double param_;
};

struct LagWindowEstimate {
  double gamma_sq;
  double c_n;
  Window window;
  double gamma0;
  std::size_t n;
};

struct QuadraticForm {
  double quad;
  double r_n;
};

/// gamma_{n,k} = n^{-1} sum_{j=1}^{n-k} (h_j - mean)(h_{j+k} - mean); divisor n for every lag.
double autocovariance(const ScalarSeries& s, std::size_t k);

/// gamma_{n,0..max_lag}. Picks the direct or FFT kernel by problem size.
std::vector<double> autocovariances(const ScalarSeries& s, std::size_t max_lag);

/// Largest lag k <= n - 1 with k / c_n < b, i.e. the last lag the window can weight (0 if none).
std::size_t last_active_lag(const Window& w, double c_n, std::size_t n);

/// w_{n,b}(k): n^{-1} at k = 0, 2 n^{-1} w_b(k / c_n) for k > 0 and zero for k < 0.
double lag_weight(const Window& w, double c_n, std::size_t n, std::ptrdiff_t k) noexcept;

/// Gamma^2_{n,b} = gamma_0 + 2 sum_{k>=1} w_b(k / c_n) gamma_k.
LagWindowEstimate lag_window_estimate(const ScalarSeries& s, const Window& w, double c_n);

/// Same estimator from precomputed autocovariances; `gamma` must reach last_active_lag.
LagWindowEstimate lag_window_from_autocovariances(std::span<const double> gamma, std::size_t n,
                                                  const Window& w, double c_n);

/// Quadratic-form split of the estimator on the raw (uncentered) series:
/// quad = sum_l sum_{j<=l} w_{n,b}(l - j) h_j h_l and r_n the remainder, quad + r_n = Gamma^2.
QuadraticForm quadratic_form_value(const ScalarSeries& s, const Window& w, double c_n);

/// The R_n part alone, O(n).
double remainder_rn(const ScalarSeries& s, const Window& w, double c_n);

namespace kernels {

/// Direct double loop over lags; serial reference.
std::vector<double> autocovariances_serial(std::span<const double> centered, std::size_t max_lag);
/// Same loop with lags distributed over OpenMP threads. Bit-identical to the serial kernel.
std::vector<double> autocovariances_parallel(std::span<const double> centered,
                                             std::size_t max_lag);
/// Zero-padded FFT correlation, O(n log n).
std::vector<double> autocovariances_fft(std::span<const double> centered, std::size_t max_lag);

}  // namespace kernels

}  // namespace lrv
