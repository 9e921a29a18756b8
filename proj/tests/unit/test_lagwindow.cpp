#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lrv/chain_oracle.hpp"
#include "lrv/convolution.hpp"
#include "lrv/experiments.hpp"
#include "lrv/lagwindow.hpp"
#include "lrv/samplers.hpp"

using namespace lrv;
using doctest::Approx;

namespace {
const WindowKind kAll[] = {WindowKind::Bartlett, WindowKind::Quadratic, WindowKind::Truncated,
                           WindowKind::Parzen};

// Textbook double loop, kept deliberately naive.
double naive_gamma_sq(const std::vector<double>& x, const Window& w, double c) {
  const std::size_t n = x.size();
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double g = 0.0;
    for (std::size_t j = 0; j + k < n; ++j) g += (x[j] - mu) * (x[j + k] - mu);
    g /= static_cast<double>(n);
    total += (k == 0 ? 1.0 : 2.0 * w(static_cast<double>(k) / c)) * g;
  }
  return total;
}
}  // namespace

TEST_SUITE("lagwindow") {

TEST_CASE("autocovariance by hand") {
  const ScalarSeries s({1.0, -1.0, 0.0});
  CHECK(autocovariance(s, 0) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(autocovariance(s, 1) == Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(autocovariance(s, 2) == Approx(0.0));
  CHECK_THROWS(autocovariance(s, 3));
  const ScalarSeries flat(std::vector<double>(7, 2.5));
  for (std::size_t k = 0; k < 7; ++k) CHECK(autocovariance(flat, k) == 0.0);
}

TEST_CASE("lag-window estimate and its quadratic form by hand") {
  const ScalarSeries s({1.0, -1.0, 0.0});
  const Window w(WindowKind::Bartlett, 1.0);
  const auto est = lag_window_estimate(s, w, 2.0);
  CHECK(est.gamma_sq == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(est.gamma0 == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(est.n == 3);
  const auto qf = quadratic_form_value(s, w, 2.0);
  CHECK(qf.quad + qf.r_n == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(remainder_rn(s, w, 2.0) == Approx(qf.r_n).epsilon(1e-14));

  const ScalarSeries zero(std::vector<double>(10, 0.0));
  const auto qz = quadratic_form_value(zero, w, 3.0);
  CHECK(qz.quad == 0.0);
  CHECK(qz.r_n == 0.0);
  CHECK(lag_window_estimate(ScalarSeries(std::vector<double>(9, 4.0)), w, 3.0).gamma_sq == 0.0);
}

TEST_CASE("preconditions") {
  CHECK_THROWS(ScalarSeries({1.0, std::nan("")}));
  CHECK_THROWS(lag_window_estimate(ScalarSeries({1.0}), Window(WindowKind::Bartlett, 1.0), 1.0));
  CHECK_THROWS(
      lag_window_estimate(ScalarSeries({1.0, 2.0}), Window(WindowKind::Bartlett, 1.0), 0.0));
}

TEST_CASE("bandwidth rules") {
  CHECK(BandwidthRule::classical(0.5).bandwidth(10000) == Approx(100.0));
  CHECK(BandwidthRule::fixed_b(0.3).bandwidth(500) == 500.0);
  CHECK(BandwidthRule::classical(0.1).bandwidth(2) >= 1.0);
  CHECK(BandwidthRule::parse("delta:0.6", 1.0).parameter() == Approx(0.6));
  CHECK(BandwidthRule::parse("fixedb", 0.4).is_fixed_b());
  CHECK_THROWS(BandwidthRule::classical(1.5));
  CHECK_THROWS(BandwidthRule::parse("bogus", 1.0));
}

TEST_CASE("agrees with a naive double loop") {
  for (auto k : kAll) {
    for (std::size_t n : {2u, 3u, 17u, 200u}) {
      const auto x = test::gaussian_series(n, 5, n);
      const ScalarSeries s(x);
      for (double b : {0.3, 1.0}) {
        const Window w(k, b);
        const double c = std::sqrt(static_cast<double>(n));
        const double ref = naive_gamma_sq(x, w, c);
        REQUIRE(lag_window_estimate(s, w, c).gamma_sq == Approx(ref).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("quadratic form plus R_n reproduces the estimate") {
  std::uint64_t stream = 0;
  for (std::size_t n : {2u, 5u, 50u, 333u, 1000u}) {
    const auto x = test::ar1_series(n, 0.6, 100 + stream++);
    const ScalarSeries s(x);
    for (auto k : kAll) {
      for (double b : {0.3, 0.5, 0.9, 1.0}) {
        for (double c : {std::sqrt(static_cast<double>(n)), static_cast<double>(n)}) {
          const Window w(k, b);
          const double g = lag_window_estimate(s, w, c).gamma_sq;
          const auto qf = quadratic_form_value(s, w, c);
          CAPTURE(n);
          CAPTURE(b);
          REQUIRE(std::abs(g - (qf.quad + qf.r_n)) <= 1e-10 * (1.0 + std::abs(g)));
          REQUIRE(std::abs(qf.r_n - remainder_rn(s, w, c)) <= 1e-10 * (1.0 + std::abs(g)));
        }
      }
    }
  }
}

TEST_CASE("Bartlett estimate is nonnegative") {
  RngStream lengths(77, 0);
  for (std::uint64_t i = 0; i < 300; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(lengths.uniform() * 499.0);
    const auto x = test::ar1_series(n, -0.9, 1000 + i);
    const ScalarSeries s(x);
    const double c = 1.0 + lengths.uniform() * static_cast<double>(n);
    REQUIRE(lag_window_estimate(s, Window(WindowKind::Bartlett, 1.0), c).gamma_sq >= -1e-12);
  }
}

TEST_CASE("shift invariance and scale equivariance") {
  const auto x = test::ar1_series(400, 0.5, 3);
  for (auto k : kAll) {
    const Window w(k, 0.7);
    const double base = lag_window_estimate(ScalarSeries(x), w, 20.0).gamma_sq;
    auto shifted = x;
    for (auto& v : shifted) v += 12.5;
    CHECK(std::abs(lag_window_estimate(ScalarSeries(shifted), w, 20.0).gamma_sq - base) <=
          1e-10);
    auto scaled = x;
    for (auto& v : scaled) v *= 4.0;  // power of two, so exact
    CHECK(lag_window_estimate(ScalarSeries(scaled), w, 20.0).gamma_sq == 16.0 * base);
  }
}

TEST_CASE("autocovariance kernels agree") {
  for (std::size_t n : {2u, 10u, 1000u, 4097u}) {
    const auto centered = ScalarSeries(test::gaussian_series(n, 9, n)).centered();
    const std::size_t lags = n - 1;
    const auto serial = kernels::autocovariances_serial(centered, lags);
    const auto parallel = kernels::autocovariances_parallel(centered, lags);
    const auto fft = kernels::autocovariances_fft(centered, lags);
    REQUIRE(serial.size() == lags + 1);
    for (std::size_t k = 0; k <= lags; ++k) {
      REQUIRE(parallel[k] == serial[k]);  // same per-lag summation order
      REQUIRE(std::abs(fft[k] - serial[k]) <= 1e-12 * (1.0 + std::abs(serial[0])));
    }
  }
}

TEST_CASE("last active lag respects the support") {
  const Window w(WindowKind::Bartlett, 0.5);
  CHECK(last_active_lag(w, 100.0, 1000) == 49);
  CHECK(last_active_lag(w, 1000.0, 1000) == 499);
  CHECK(last_active_lag(Window(WindowKind::Truncated, 1.0), 1000.0, 1000) == 999);
  CHECK(lag_weight(w, 100.0, 1000, 0) == Approx(1.0 / 1000.0));
  CHECK(lag_weight(w, 100.0, 1000, 25) == Approx(2.0 / 1000.0 * 0.5));
  CHECK(lag_weight(w, 100.0, 1000, -1) == 0.0);
}

TEST_CASE("causal convolution: moment recursion against direct sum") {
  for (auto k : kAll) {
    for (double b : {0.05, 0.3, 1.0}) {
      for (std::size_t n : {1u, 2u, 64u, 1500u}) {
        const auto x = test::gaussian_series(n, 21, n);
        const Window w(k, b);
        const double scale = static_cast<double>(n);
        const auto fast = causal_window_convolution(x, w, scale);
        const auto slow = causal_window_convolution_direct(x, w, scale);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(fast[i] == Approx(slow[i]).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("two-state chain path is near the exact variance") {
  const auto chain = experiments::two_state_chain();
  RngStream rng(4242, 0);
  const auto path = sampling::simulate_finite_chain(chain, 100000, rng);
  std::vector<double> x(path.begin() + 1, path.end());
  const double c = std::pow(1e5, 0.6);
  const double g = lag_window_estimate(ScalarSeries(x), Window(WindowKind::Bartlett, 1.0), c).gamma_sq;
  CHECK(std::abs(g - 34.0 / 27.0) < 0.25);
}

}
