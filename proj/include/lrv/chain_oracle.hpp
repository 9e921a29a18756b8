#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lrv/windows.hpp"

namespace lrv::oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// State indices X_0, X_1, ..., X_n.
using Path = std::vector<int>;

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-state transition kernel P with initial law rho (uniform unless given).
class FiniteChain {
 public:
  explicit FiniteChain(Matrix P);
  FiniteChain(Matrix P, Vector initial);

  const Matrix& P() const noexcept { return P_; }
  const Vector& initial() const noexcept { return initial_; }
  int states() const noexcept { return static_cast<int>(P_.rows()); }

  /// Irreducible and aperiodic: some power of P is entrywise positive.
  bool is_primitive() const;

 private:
  Matrix P_;
  Vector initial_;
};

/// pi with pi P = pi, sum pi = 1. Throws ChainError for a non-primitive chain.
Vector stationary(const FiniteChain& chain);

struct PoissonSolution {
  Vector h;   // f - pi(f)
  Vector G;   // (I - P) G = h, pi G = 0
  Vector PG;  // P G
};

PoissonSolution poisson_solve(const FiniteChain& chain, const Vector& f);

/// D = sum_{k>=0} (P^k - Pi): solves (I - P) D = I - Pi with Pi D = 0.
Matrix deviation_operator(const FiniteChain& chain);

struct BivariateSolution {
  double theta;
  Vector h1bar;
  Matrix h2bar;
  Matrix G2bar;    // D h2bar D^T
  Matrix PG2bar;   // P G2bar (first coordinate)
  Matrix P2G2bar;  // P G2bar P^T
};

/// Hoeffding projections of a symmetric kernel and the bivariate Poisson solution.
BivariateSolution bivariate_poisson_solve(const FiniteChain& chain, const Matrix& h);

/// max |h2bar - (G2bar - P G2bar - G2bar P^T + P G2bar P^T)|.
double verify_bivariate_poisson(const BivariateSolution& sol, const FiniteChain& chain);

/// Lambda_2(x1, x2; y1, y2) = G2bar(y1,y2) - PG2bar(x1,y2) - PG2bar(x2,y1) + P2G2bar(x1,x2).
double lambda2(const BivariateSolution& sol, int x1, int x2, int y1, int y2);

/// max over the free states of |sum_y P(x,y) Lambda_2(u,x;v,y)| and |sum_v P(u,v) Lambda_2(u,x;v,y)|.
double verify_martingale_property(const BivariateSolution& sol, const FiniteChain& chain);

struct Sigma2Pair {
  double via_poisson;     // pi(h (2G - h))
  double via_increments;  // sum_x pi(x) sum_y P(x,y) (G(y) - PG(x))^2
};

Sigma2Pair exact_sigma2_both(const FiniteChain& chain, const Vector& f);

/// Long-run variance of f along the stationary chain. Throws std::logic_error when the
/// two formulas disagree beyond 1e-12 relative.
double exact_sigma2(const FiniteChain& chain, const Vector& f);

/// Q_l = G(X_l) - PG(X_{l-1}) for l = 1..n; entry l - 1 holds Q_l.
std::vector<double> q_sequence(const Path& path, const PoissonSolution& sol);

/// Q_{n,l,j} = Lambda_2(X_{j-1}, X_{l-1}, X_j, X_l) for 1 <= j <= l <= n.
double q_general(const Path& path, const BivariateSolution& sol, std::size_t l, std::size_t j);

struct DecompositionReport {
  double gamma_sq;
  double term_diag;
  double term_quad;
  double term_rn;
  double term_zeta;
  double zeta_implicit;  // quad - term_diag - term_quad
  double residual;       // gamma_sq - (diag + quad + rn + zeta)
};

enum class ZetaMode { Explicit, Implicit };

/// Splits the lag-window estimate of f along `path` (f centred by the exact pi) into
/// n^{-1} sum Q_l^2, the weighted martingale double sum, R_n and zeta. Explicit mode
/// evaluates zeta from difference sequences of the lag weights in O(n * lags); implicit mode
/// takes zeta_implicit and uses an O(n) filter for the martingale sum.
DecompositionReport decomposition_report(const Path& path, const Window& w, double c_n,
                                         const FiniteChain& chain, const Vector& f,
                                         ZetaMode mode = ZetaMode::Explicit);

/// Weight matrix w_n(l, j); must be defined for 0 <= l, j <= n.
using WeightFn = std::function<double(long, long)>;

struct Lemma2Terms {
  double u_n;
  double u_n0;
  double linear;
  double diagonal;
  double quadratic;
  double zeta_explicit;
  double zeta_implicit;
};

Lemma2Terms lemma2_terms(const Path& path, const WeightFn& w, const Matrix& h,
                         const FiniteChain& chain);

struct LinearDecomposition {
  double total;       // sum a_l h(X_l)
  double martingale;  // sum a_l Q_l
  double remainder;   // Abel-summation terms
};

/// `a` holds a_1..a_n. h = f - pi(f).
LinearDecomposition linear_martingale_decomposition(const Path& path, std::span<const double> a,
                                                    const FiniteChain& chain, const Vector& f);

/// Throws std::invalid_argument unless every state index lies in [0, S) and the path has
/// at least two entries.
void check_path(const Path& path, int states);

}  // namespace lrv::oracle
