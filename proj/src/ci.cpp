#include "lrv/ci.hpp"

#include <cmath>
#include <string>

#include "lrv/stats.hpp"

namespace lrv {

NonpositiveVarianceEstimate::NonpositiveVarianceEstimate(double gamma_sq)
    : std::runtime_error("lag-window variance estimate is not positive: " +
                         std::to_string(gamma_sq)),
      gamma_sq_(gamma_sq) {}

std::string_view to_string(CiMethod method) noexcept {
  return method == CiMethod::Classical ? "classical" : "fixedb";
}

ConfidenceInterval interval_from_sigma(double center, double sigma_hat, std::size_t n,
                                       double critical, CiMethod method, double param,
                                       double alpha) {
  if (n == 0) throw std::invalid_argument("interval needs n >= 1");
  if (!(sigma_hat >= 0.0) || !(critical >= 0.0)) {
    throw std::invalid_argument("sigma_hat and critical value must be nonnegative");
  }
  const double half = critical * sigma_hat / std::sqrt(static_cast<double>(n));
  return {center, half, center - half, center + half, method, param, alpha, sigma_hat};
}

namespace {

double positive_sigma(const LagWindowEstimate& est) {
  if (!(est.gamma_sq > 0.0)) throw NonpositiveVarianceEstimate(est.gamma_sq);
  return std::sqrt(est.gamma_sq);
}

}  // namespace

ConfidenceInterval classical_ci(const ScalarSeries& s, double alpha, double delta,
                                WindowKind kind) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  const auto rule = BandwidthRule::classical(delta);
  const auto est = lag_window_estimate(s, Window(kind, 1.0), rule.bandwidth(s.size()));
  return interval_from_sigma(s.mean(), positive_sigma(est), s.size(),
                             normal_quantile(1.0 - alpha / 2.0), CiMethod::Classical, delta,
                             alpha);
}

ConfidenceInterval fixedb_ci(const ScalarSeries& s, double alpha, double b, WindowKind kind,
                             const CriticalValueTable& table) {
  if (!(table.window == Window(kind, b))) {
    throw std::invalid_argument("critical value table was built for " +
                                std::string(to_string(table.window.kind())) +
                                " b=" + std::to_string(table.window.b()));
  }
  return fixedb_ci(s, alpha, b, kind, table.critical_value(alpha));
}

ConfidenceInterval fixedb_ci(const ScalarSeries& s, double alpha, double b, WindowKind kind,
                             double critical) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  const auto rule = BandwidthRule::fixed_b(b);
  const auto est = lag_window_estimate(s, Window(kind, b), rule.bandwidth(s.size()));
  return interval_from_sigma(s.mean(), positive_sigma(est), s.size(), critical,
                             CiMethod::FixedB, b, alpha);
}

}  // namespace lrv
