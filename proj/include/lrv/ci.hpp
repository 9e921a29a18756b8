#pragma once

#include <stdexcept>
#include <string_view>

#include "lrv/fixedb.hpp"
#include "lrv/lagwindow.hpp"
#include "lrv/windows.hpp"

namespace lrv {

class NonpositiveVarianceEstimate : public std::runtime_error {
 public:
  explicit NonpositiveVarianceEstimate(double gamma_sq);
  double gamma_sq() const noexcept { return gamma_sq_; }

 private:
  double gamma_sq_;
};

enum class CiMethod { Classical, FixedB };

std::string_view to_string(CiMethod method) noexcept;

struct ConfidenceInterval {
  double center;
  double half_width;
  double lower;
  double upper;
  CiMethod method;
  double param;  // delta for classical, b for fixed-b
  double alpha;
  double sigma_hat;
};

/// center +- critical * sigma_hat / sqrt(n).
ConfidenceInterval interval_from_sigma(double center, double sigma_hat, std::size_t n,
                                       double critical, CiMethod method, double param,
                                       double alpha);

/// Window parameter 1, bandwidth n^delta, normal critical value.
ConfidenceInterval classical_ci(const ScalarSeries& s, double alpha, double delta,
                                WindowKind kind);

/// Window parameter b, bandwidth n, critical value from `table`, which must have been
/// simulated for the same window and b.
ConfidenceInterval fixedb_ci(const ScalarSeries& s, double alpha, double b, WindowKind kind,
                             const CriticalValueTable& table);

/// Same as above when the critical value is already known.
ConfidenceInterval fixedb_ci(const ScalarSeries& s, double alpha, double b, WindowKind kind,
                             double critical);

}  // namespace lrv
