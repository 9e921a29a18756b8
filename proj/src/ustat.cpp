#include "lrv/ustat.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lrv::ustat {

using oracle::Matrix;
using oracle::Path;
using oracle::Vector;

DegenerateKernel::DegenerateKernel(double sigma2)
    : std::runtime_error("kernel is degenerate: sigma_{n,1}^2 = " + std::to_string(sigma2)),
      sigma2_(sigma2) {}

double u_statistic(std::span<const double> values,
                   const std::function<double(double, double)>& h) {
  if (values.size() < 2) throw std::invalid_argument("U-statistic needs n >= 2");
  double total = 0.0;
  for (std::size_t l = 1; l < values.size(); ++l) {
    for (std::size_t j = 0; j < l; ++j) total += h(values[l], values[j]);
  }
  return total;
}

namespace {

void check_square(const Matrix& h, const Path& path) {
  if (h.rows() != h.cols()) throw std::invalid_argument("kernel must be square");
  oracle::check_path(path, static_cast<int>(h.rows()));
}

}  // namespace

double u_statistic(const Path& path, const Matrix& h) {
  check_square(h, path);
  // seen = h * counts of X_1..X_{l-1}, kept up to date column by column.
  Vector seen = Vector::Zero(h.rows());
  double total = 0.0;
  for (std::size_t l = 1; l < path.size(); ++l) {
    total += seen(path[l]);
    seen += h.col(path[l]);
  }
  return total;
}

double u_statistic_direct(const Path& path, const Matrix& h) {
  check_square(h, path);
  double total = 0.0;
  for (std::size_t l = 2; l < path.size(); ++l) {
    for (std::size_t j = 1; j < l; ++j) total += h(path[l], path[j]);
  }
  return total;
}

CltNormalization clt_normalization(const oracle::FiniteChain& chain, const Matrix& h,
                                   std::size_t n) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const auto sol = oracle::bivariate_poisson_solve(chain, h);
  const double s1 = oracle::exact_sigma2(chain, sol.h1bar);
  if (!(s1 > 1e-14)) throw DegenerateKernel(s1);
  const double dn = static_cast<double>(n);
  return {sol.theta, s1, dn * (dn - 1.0) * (dn - 1.0) * s1, n};
}

CltResult clt_normalize(const Path& path, const oracle::FiniteChain& chain, const Matrix& h) {
  oracle::check_path(path, chain.states());
  const std::size_t n = path.size() - 1;
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const CltNormalization norm = clt_normalization(chain, h, n);
  const auto sol = oracle::bivariate_poisson_solve(chain, h);
  const double dn = static_cast<double>(n);
  const double u = u_statistic(path, 0.5 * (h + h.transpose()));
  double lin = 0.0;
  for (std::size_t l = 1; l <= n; ++l) lin += sol.h1bar(path[l]);
  return {(u - norm.theta * dn * (dn - 1.0) / 2.0) / std::sqrt(norm.sigma_n_sq),
          lin / (std::sqrt(norm.sigma_n1_sq) * std::sqrt(dn)), norm};
}

UDecomposition quadratic_remainder(const Path& path, const oracle::FiniteChain& chain,
                                   const Matrix& h) {
  oracle::check_path(path, chain.states());
  const std::size_t n = path.size() - 1;
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const auto sol = oracle::bivariate_poisson_solve(chain, h);
  const double dn = static_cast<double>(n);
  const auto s = h.rows();

  UDecomposition d{};
  d.u_n = u_statistic(path, 0.5 * (h + h.transpose()));
  d.centering = sol.theta * dn * (dn - 1.0) / 2.0;
  for (std::size_t l = 1; l <= n; ++l) d.linear += sol.h1bar(path[l]);
  d.linear *= dn - 1.0;

  // For each l, sum_{j<l} Lambda_2(X_{j-1}, X_{l-1}, X_j, X_l) from counts of X_1..X_{l-1}
  // (c1) and X_0..X_{l-2} (c0).
  Vector c1 = Vector::Zero(s), c0 = Vector::Zero(s);
  for (std::size_t l = 1; l <= n; ++l) {
    const int xl = path[l];
    const int xp = path[l - 1];
    d.quadratic += c1.dot(sol.G2bar.col(xl)) - c1.dot(sol.PG2bar.row(xp)) -
                   c0.dot(sol.PG2bar.col(xl)) + c0.dot(sol.P2G2bar.col(xp));
    c1(xl) += 1.0;
    c0(xp) += 1.0;
  }
  d.remainder = d.u_n - d.centering - d.linear - d.quadratic;
  return d;
}

}  // namespace lrv::ustat
