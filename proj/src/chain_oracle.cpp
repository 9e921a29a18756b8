#include "lrv/chain_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lrv/convolution.hpp"
#include "lrv/lagwindow.hpp"

namespace lrv::oracle {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kPositiveTol = 1e-14;

void check_probability_vector(const Vector& v, Eigen::Index size, const char* what) {
  if (v.size() != size) throw ChainError(std::string(what) + " has the wrong length");
  if ((v.array() < 0.0).any() || !v.allFinite()) {
    throw ChainError(std::string(what) + " has negative or non-finite entries");
  }
  if (std::abs(v.sum() - 1.0) > kStochasticTol) {
    throw ChainError(std::string(what) + " does not sum to one");
  }
}

Matrix pi_matrix(const Vector& pi) { return Vector::Ones(pi.size()) * pi.transpose(); }

// (I - P + Pi)^{-1}
Matrix fundamental_matrix(const FiniteChain& chain, const Vector& pi) {
  const auto s = chain.P().rows();
  const Matrix a = Matrix::Identity(s, s) - chain.P() + pi_matrix(pi);
  return a.fullPivLu().inverse();
}

void check_kernel(const Matrix& h, int states) {
  if (h.rows() != states || h.cols() != states) {
    throw std::invalid_argument("kernel must be an S x S matrix");
  }
  if (!h.allFinite()) throw std::invalid_argument("kernel has non-finite entries");
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("kernel must be symmetric");
  }
}

}  // namespace

FiniteChain::FiniteChain(Matrix P)
    : FiniteChain(P, Vector::Constant(P.rows(), P.rows() > 0 ? 1.0 / P.rows() : 0.0)) {}

FiniteChain::FiniteChain(Matrix P, Vector initial) : P_(std::move(P)), initial_(std::move(initial)) {
  if (P_.rows() == 0 || P_.rows() != P_.cols()) {
    throw std::invalid_argument("transition matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < P_.rows(); ++i) {
    check_probability_vector(P_.row(i).transpose(), P_.cols(), "transition row");
  }
  check_probability_vector(initial_, P_.rows(), "initial distribution");
}

bool FiniteChain::is_primitive() const {
  // Wielandt: a primitive S x S pattern has a positive power at exponent (S-1)^2 + 1.
  using Pattern = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  const auto s = P_.rows();
  const Pattern base = (P_.array() > kPositiveTol).cast<int>();
  const long target = (s - 1) * (s - 1) + 1;
  Pattern result = base;
  long power = 1;
  while (power < target) {
    Pattern next = ((result * result).array() > 0).cast<int>();
    power *= 2;
    result = next;
  }
  // A positive power stays positive at every higher power, so overshooting is harmless.
  return (result.array() > 0).all();
}

Vector stationary(const FiniteChain& chain) {
  if (!chain.is_primitive()) throw ChainError("chain is reducible or periodic");
  const auto s = chain.P().rows();
  const Matrix a = Matrix::Identity(s, s) - chain.P() + Matrix::Ones(s, s);
  Vector pi = a.transpose().fullPivLu().solve(Vector::Ones(s));
  pi /= pi.sum();
  return pi;
}

Matrix deviation_operator(const FiniteChain& chain) {
  const Vector pi = stationary(chain);
  return fundamental_matrix(chain, pi) - pi_matrix(pi);
}

PoissonSolution poisson_solve(const FiniteChain& chain, const Vector& f) {
  if (f.size() != chain.states()) throw std::invalid_argument("function length must equal S");
  const Vector pi = stationary(chain);
  const auto s = chain.P().rows();
  Vector h = f - Vector::Constant(s, pi.dot(f));
  const Matrix a = Matrix::Identity(s, s) - chain.P() + pi_matrix(pi);
  Vector G = a.fullPivLu().solve(h);
  G -= Vector::Constant(s, pi.dot(G));
  Vector PG = chain.P() * G;
  return {std::move(h), std::move(G), std::move(PG)};
}

BivariateSolution bivariate_poisson_solve(const FiniteChain& chain, const Matrix& h) {
  check_kernel(h, chain.states());
  const Vector pi = stationary(chain);
  const auto s = chain.P().rows();
  const Matrix hs = 0.5 * (h + h.transpose());
  const double theta = pi.dot(hs * pi);
  Vector h1 = hs * pi - Vector::Constant(s, theta);
  Matrix h2 = hs - h1 * Vector::Ones(s).transpose() - Vector::Ones(s) * h1.transpose() -
              Matrix::Constant(s, s, theta);
  const Matrix d = fundamental_matrix(chain, pi) - pi_matrix(pi);
  Matrix g2 = d * h2 * d.transpose();
  Matrix pg2 = chain.P() * g2;
  Matrix p2g2 = pg2 * chain.P().transpose();
  return {theta, std::move(h1), std::move(h2), std::move(g2), std::move(pg2), std::move(p2g2)};
}

double verify_bivariate_poisson(const BivariateSolution& sol, const FiniteChain& chain) {
  const Matrix rebuilt =
      sol.G2bar - sol.PG2bar - sol.G2bar * chain.P().transpose() + sol.P2G2bar;
  return (sol.h2bar - rebuilt).cwiseAbs().maxCoeff();
}

double lambda2(const BivariateSolution& sol, int x1, int x2, int y1, int y2) {
  return sol.G2bar(y1, y2) - sol.PG2bar(x1, y2) - sol.PG2bar(x2, y1) + sol.P2G2bar(x1, x2);
}

double verify_martingale_property(const BivariateSolution& sol, const FiniteChain& chain) {
  const int s = chain.states();
  const Matrix& P = chain.P();
  double worst = 0.0;
  for (int u = 0; u < s; ++u) {
    for (int x = 0; x < s; ++x) {
      for (int v = 0; v < s; ++v) {
        double over_y = 0.0;
        double over_v = 0.0;
        for (int y = 0; y < s; ++y) {
          over_y += P(x, y) * lambda2(sol, u, x, v, y);
          // Second check: the outer v is held fixed as y and the inner index runs over v.
          over_v += P(u, y) * lambda2(sol, u, x, y, v);
        }
        worst = std::max({worst, std::abs(over_y), std::abs(over_v)});
      }
    }
  }
  return worst;
}

Sigma2Pair exact_sigma2_both(const FiniteChain& chain, const Vector& f) {
  const Vector pi = stationary(chain);
  const PoissonSolution sol = poisson_solve(chain, f);
  const double first = pi.dot(sol.h.cwiseProduct(2.0 * sol.G - sol.h));
  double second = 0.0;
  const int s = chain.states();
  for (int x = 0; x < s; ++x) {
    double inner = 0.0;
    for (int y = 0; y < s; ++y) {
      const double d = sol.G(y) - sol.PG(x);
      inner += chain.P()(x, y) * d * d;
    }
    second += pi(x) * inner;
  }
  return {first, second};
}

double exact_sigma2(const FiniteChain& chain, const Vector& f) {
  const Sigma2Pair both = exact_sigma2_both(chain, f);
  const double scale = std::max({1.0, std::abs(both.via_poisson), std::abs(both.via_increments)});
  if (std::abs(both.via_poisson - both.via_increments) > 1e-12 * scale) {
    throw std::logic_error("long-run variance formulas disagree");
  }
  return both.via_poisson;
}

void check_path(const Path& path, int states) {
  if (path.size() < 2) throw std::invalid_argument("path needs X_0 and at least one step");
  for (int x : path) {
    if (x < 0 || x >= states) throw std::out_of_range("path state index out of range");
  }
}

std::vector<double> q_sequence(const Path& path, const PoissonSolution& sol) {
  check_path(path, static_cast<int>(sol.G.size()));
  std::vector<double> q(path.size() - 1);
  for (std::size_t l = 1; l < path.size(); ++l) q[l - 1] = sol.G(path[l]) - sol.PG(path[l - 1]);
  return q;
}

double q_general(const Path& path, const BivariateSolution& sol, std::size_t l, std::size_t j) {
  if (j < 1 || j > l || l >= path.size()) throw std::out_of_range("need 1 <= j <= l <= n");
  return lambda2(sol, path[j - 1], path[l - 1], path[j], path[l]);
}

DecompositionReport decomposition_report(const Path& path, const Window& w, double c_n,
                                         const FiniteChain& chain, const Vector& f,
                                         ZetaMode mode) {
  check_path(path, chain.states());
  const PoissonSolution sol = poisson_solve(chain, f);
  const std::size_t n = path.size() - 1;
  const double dn = static_cast<double>(n);

  std::vector<double> h(n), q(n), a(n + 1);
  for (std::size_t l = 0; l <= n; ++l) a[l] = sol.PG(path[l]);
  for (std::size_t l = 1; l <= n; ++l) {
    h[l - 1] = sol.h(path[l]);
    q[l - 1] = sol.G(path[l]) - a[l - 1];
  }

  const ScalarSeries series(h);
  const double gamma_sq = lag_window_estimate(series, w, c_n).gamma_sq;

  double diag = 0.0;
  for (double v : q) diag += v * v;
  diag /= dn;

  const std::size_t last = last_active_lag(w, c_n, n);
  // wl[k] = w_{n,b}(k) for k = 0..n+1.
  std::vector<double> wl(n + 2, 0.0);
  for (std::size_t k = 0; k <= last; ++k) wl[k] = lag_weight(w, c_n, n, static_cast<std::ptrdiff_t>(k));

  DecompositionReport rep{};
  rep.gamma_sq = gamma_sq;
  rep.term_diag = diag;

  if (mode == ZetaMode::Implicit) {
    // Both double sums through the O(n) causal filter.
    auto lagged = [&](const std::vector<double>& x) {
      const auto filtered = causal_window_convolution(x, w, c_n);
      double acc = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] * filtered[i];
        sq += x[i] * x[i];
      }
      return std::pair{sq / dn, 2.0 * acc / dn};
    };
    const auto [h_diag, h_off] = lagged(h);
    rep.term_rn = remainder_rn(series, w, c_n);
    rep.term_quad = lagged(q).second;
    rep.zeta_implicit = h_diag + h_off - diag - rep.term_quad;
    rep.term_zeta = rep.zeta_implicit;
    rep.residual = gamma_sq - (rep.term_diag + rep.term_quad + rep.term_rn + rep.term_zeta);
    return rep;
  }

  // Sequences below are 1-based in l and j; q[l - 1] holds Q_l.
  auto wk = [&](std::ptrdiff_t k) {
    return k < 0 || k > static_cast<std::ptrdiff_t>(n + 1) ? 0.0 : wl[static_cast<std::size_t>(k)];
  };
  auto d1 = [&](std::ptrdiff_t k) { return wk(k) - wk(k - 1); };
  auto d2 = [&](std::ptrdiff_t k) { return 2.0 * wk(k) - wk(k + 1) - wk(k - 1); };
  const auto band = static_cast<std::ptrdiff_t>(last) + 1;  // d1, d2 vanish beyond this lag

  double quad_mart = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
  for (std::ptrdiff_t l = 1; l <= static_cast<std::ptrdiff_t>(n); ++l) {
    const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(1, l - band);
    double s_quad = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::ptrdiff_t j = j0; j <= l; ++j) {
      const double qj = q[static_cast<std::size_t>(j - 1)];
      const double aj1 = a[static_cast<std::size_t>(j - 1)];
      if (j < l) s_quad += wk(l - j) * qj;
      s1 += d1(l - j) * qj;
      s2 += d1(l - j + 1) * aj1;
      s3 += d2(l - j) * aj1;
    }
    const double ql = q[static_cast<std::size_t>(l - 1)];
    const double al1 = a[static_cast<std::size_t>(l - 1)];
    quad_mart += ql * s_quad;
    t1 += al1 * s1;
    t2 += ql * s2;
    t3 += al1 * s3;
  }

  double head = 0.0, tail = 0.0, diag_fix = 0.0;
  for (std::size_t l = 1; l <= n; ++l) {
    const auto sl = static_cast<std::ptrdiff_t>(l);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    head += wk(sl) * q[l - 1] + d1(sl) * a[l - 1];
    tail += wk(sn - sl) * q[l - 1] - d1(sn - sl) * a[l];
    diag_fix += a[l] * (q[l - 1] + a[l - 1]);
  }
  const double zeta = t1 - t2 + t3 + a[0] * head - a[n] * tail -
                      wk(static_cast<std::ptrdiff_t>(n) - 1) * a[n] * a[0] - wk(0) * diag_fix;

  const QuadraticForm qf = quadratic_form_value(series, w, c_n);
  rep.term_rn = qf.r_n;
  rep.term_quad = quad_mart;
  rep.term_zeta = zeta;
  rep.zeta_implicit = qf.quad - diag - quad_mart;
  rep.residual = gamma_sq - (rep.term_diag + rep.term_quad + rep.term_rn + rep.term_zeta);
  return rep;
}

Lemma2Terms lemma2_terms(const Path& path, const WeightFn& w, const Matrix& h,
                         const FiniteChain& chain) {
  check_path(path, chain.states());
  const BivariateSolution sol = bivariate_poisson_solve(chain, h);
  const long n = static_cast<long>(path.size()) - 1;
  const Matrix hs = 0.5 * (h + h.transpose());

  // wt(l, j) for 0 <= l, j <= n.
  Matrix wt(n + 1, n + 1);
  for (long l = 0; l <= n; ++l) {
    for (long j = 0; j <= n; ++j) {
      const double v = w(l, j);
      if (!std::isfinite(v)) throw std::invalid_argument("weights must be finite");
      wt(l, j) = v;
    }
  }
  const Matrix& A = sol.PG2bar;
  const Matrix& B = sol.P2G2bar;
  auto X = [&path](long i) { return path[static_cast<std::size_t>(i)]; };

  Lemma2Terms t{};
  double weight_total = 0.0;
  for (long l = 1; l <= n; ++l) {
    for (long j = 1; j <= l; ++j) {
      t.u_n += wt(l, j) * hs(X(l), X(j));
      weight_total += wt(l, j);
      const double qlj = lambda2(sol, X(j - 1), X(l - 1), X(j), X(l));
      if (j == l) {
        t.diagonal += wt(l, l) * qlj;
      } else {
        t.quadratic += wt(l, j) * qlj;
      }
      const double v1 = wt(l, j) - wt(l - 1, j);
      const double v2 = wt(l, j) - wt(l, j - 1);
      const double v3 = wt(l, j) + wt(l - 1, j - 1) - wt(l, j - 1) - wt(l - 1, j);
      const double b_prev = B(X(l - 1), X(j - 1));
      t.zeta_explicit += v1 * (A(X(l - 1), X(j)) - b_prev) + v2 * (A(X(j - 1), X(l)) - b_prev) +
                         v3 * b_prev;
    }
    double w1 = 0.0;
    for (long j = 1; j <= l; ++j) w1 += wt(l, j);
    for (long j = l; j <= n; ++j) w1 += wt(j, l);
    t.linear += w1 * sol.h1bar(X(l));
  }
  t.u_n0 = sol.theta * weight_total;

  double eps = 0.0;
  for (long l = 1; l <= n; ++l) {
    eps += wt(l, 0) * A(X(0), X(l)) - wt(l - 1, 0) * B(X(0), X(l - 1));
    eps += wt(n, l) * (B(X(n), X(l)) - A(X(n), X(l)));
    eps += wt(l - 1, l) * A(X(l - 1), X(l)) - wt(l, l) * A(X(l), X(l));
  }
  t.zeta_explicit += eps;
  t.zeta_implicit = t.u_n - (t.u_n0 + t.linear + t.diagonal + t.quadratic);
  return t;
}

LinearDecomposition linear_martingale_decomposition(const Path& path, std::span<const double> a,
                                                    const FiniteChain& chain, const Vector& f) {
  check_path(path, chain.states());
  const std::size_t n = path.size() - 1;
  if (a.size() != n) throw std::invalid_argument("need one coefficient per step");
  for (double v : a) {
    if (!std::isfinite(v)) throw std::invalid_argument("coefficients must be finite");
  }
  const PoissonSolution sol = poisson_solve(chain, f);
  LinearDecomposition out{};
  double prev = 0.0;  // a_0
  for (std::size_t k = 1; k <= n; ++k) {
    const double ak = a[k - 1];
    out.total += ak * sol.h(path[k]);
    out.martingale += ak * (sol.G(path[k]) - sol.PG(path[k - 1]));
    out.remainder += (ak - prev) * sol.PG(path[k - 1]);
    prev = ak;
  }
  out.remainder -= prev * sol.PG(path[n]);
  return out;
}

}  // namespace lrv::oracle
