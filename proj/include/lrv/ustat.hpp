#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "lrv/chain_oracle.hpp"

namespace lrv::ustat {

/// The first-order projection of the kernel vanishes, so the linear CLT does not apply.
class DegenerateKernel : public std::runtime_error {
 public:
  explicit DegenerateKernel(double sigma2);
  double sigma2() const noexcept { return sigma2_; }

 private:
  double sigma2_;
};

/// sum_{1 <= j < l <= n} h(x_l, x_j) over observed values, O(n^2).
double u_statistic(std::span<const double> values,
                   const std::function<double(double, double)>& h);

/// Same sum over X_1..X_n of a state path with an S x S kernel, O(n S) via running counts.
double u_statistic(const oracle::Path& path, const oracle::Matrix& h);

/// O(n^2) reference for the finite-state version.
double u_statistic_direct(const oracle::Path& path, const oracle::Matrix& h);

struct CltNormalization {
  double theta;
  double sigma_n1_sq;  // long-run variance of h1bar along the chain
  double sigma_n_sq;   // n (n-1)^2 sigma_n1_sq
  std::size_t n;
};

struct CltResult {
  double standardized;  // (U_n - theta C(n,2)) / sigma_n
  double linear;        // sum h1bar(X_l) / (sigma_n1 sqrt n)
  CltNormalization norm;
};

/// Throws DegenerateKernel when sigma_n1_sq <= 1e-14.
CltNormalization clt_normalization(const oracle::FiniteChain& chain, const oracle::Matrix& h,
                                   std::size_t n);

CltResult clt_normalize(const oracle::Path& path, const oracle::FiniteChain& chain,
                        const oracle::Matrix& h);

struct UDecomposition {
  double u_n;
  double centering;  // theta C(n,2)
  double linear;     // (n-1) sum h1bar(X_l)
  double quadratic;  // sum_{j<l} Q_{n,l,j}
  double remainder;  // u_n - centering - linear - quadratic
};

/// Realised remainder of the U-statistic decomposition, O(n S).
UDecomposition quadratic_remainder(const oracle::Path& path, const oracle::FiniteChain& chain,
                                   const oracle::Matrix& h);

}  // namespace lrv::ustat
