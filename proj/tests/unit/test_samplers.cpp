#include <doctest.h>

#include <array>
#include <cmath>

#include "helpers.hpp"
#include "lrv/ci.hpp"
#include "lrv/lagwindow.hpp"
#include "lrv/samplers.hpp"
#include "lrv/stats.hpp"
#include "lrv/windows.hpp"

using namespace lrv;
using namespace lrv::sampling;
using doctest::Approx;

TEST_SUITE("samplers") {

TEST_CASE("GARCH recursion with forced shocks") {
  const GarchParams p{1.0, 0.1, 0.7, 1.0};
  const double eps[] = {1.0, 1.0, 1.0};
  const auto path = simulate_garch(p, eps);
  CHECK(path.h[1] == Approx(1.8).epsilon(1e-15));
  CHECK(path.u[1] == Approx(std::sqrt(1.8)).epsilon(1e-15));
  CHECK(path.h[2] == Approx(1.0 + 0.7 * 1.8 + 0.1 * 1.8).epsilon(1e-15));
  CHECK(p.mean_u2() == Approx(5.0));
  CHECK_THROWS(GarchParams{-1.0, 0.1, 0.7, 1.0}.validate());
  CHECK_THROWS(GarchParams{1.0, -0.1, 0.7, 1.0}.validate());
}

TEST_CASE("GARCH without memory is iid normal") {
  const GarchParams p{2.0, 0.0, 0.0, 1.0};
  RngStream rng(4, 0);
  const auto path = simulate_garch(p, 10000, rng);
  for (std::size_t k = 1; k < path.h.size(); ++k) REQUIRE(path.h[k] == 2.0);
  std::vector<double> u(path.u.begin() + 1, path.u.end());
  const auto ks = ks_test(u, [](double x) { return normal_cdf(x / std::sqrt(2.0)); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("GARCH long run mean of u^2") {
  const GarchParams p;
  RngStream rng(5, 0);
  const auto path = simulate_garch(p, 1000000, rng);
  std::vector<double> u2(path.u.size() - 1);
  for (std::size_t k = 1; k < path.u.size(); ++k) u2[k - 1] = path.u[k] * path.u[k];
  const auto ci = fixedb_ci(ScalarSeries(u2), 0.05, 0.5, WindowKind::Bartlett, 3.557);
  CHECK(std::abs(ci.center - 5.0) < 3.0 * 2.0 * ci.half_width);
}

TEST_CASE("GARCH burn-in drops the prefix") {
  RngStream a(6, 0), b(6, 0);
  const auto full = simulate_garch(GarchParams{}, 120, a);
  const auto cut = simulate_garch(GarchParams{}, 100, b, 20);
  REQUIRE(cut.u.size() == 101);
  CHECK(cut.u[0] == full.u[20]);
  CHECK(cut.u.back() == full.u.back());
}

TEST_CASE("log posterior by substitution") {
  PoissonRegModel m{1, 1, {0.0}, {1.0}};
  const ThetaLayout lay{1, 1};
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.size()));
  theta(static_cast<Eigen::Index>(lay.sigma2_eps())) = 1.0;
  theta(static_cast<Eigen::Index>(lay.sigma2_beta())) = 1.0;
  CHECK(log_posterior(theta, m) == Approx(-1.0).epsilon(1e-15));
  m.y = {2.0};
  CHECK(log_posterior(theta, m) == Approx(-1.0).epsilon(1e-15));
  theta(static_cast<Eigen::Index>(lay.sigma2_eps())) = 0.0;
  CHECK(log_posterior(theta, m) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS(log_posterior(Eigen::VectorXd::Zero(3), m));
}

TEST_CASE("doubling the random effects quadruples their penalty") {
  RngStream rng(7, 0);
  const auto model = generate_poisson_data(PoissonTruth{}, 3, 20, 1000.0, rng);
  const ThetaLayout lay{3, 20};
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.size()));
  for (int e = 0; e < 3; ++e)
    for (int p = 0; p < 20; ++p) theta(static_cast<Eigen::Index>(lay.eps(e, p))) = rng.normal();
  theta(static_cast<Eigen::Index>(lay.sigma2_eps())) = 0.1;
  theta(static_cast<Eigen::Index>(lay.sigma2_beta())) = 0.3;
  const auto before = log_posterior_terms(theta, model);
  for (int e = 0; e < 3; ++e)
    for (int p = 0; p < 20; ++p) theta(static_cast<Eigen::Index>(lay.eps(e, p))) *= 2.0;
  const auto after = log_posterior_terms(theta, model);
  CHECK(after.eps_penalty - before.eps_penalty == Approx(3.0 * before.eps_penalty).epsilon(1e-12));
}

TEST_CASE("constrained alpha is rebuilt from the free ones") {
  RngStream rng(8, 0);
  const auto model = generate_poisson_data(PoissonTruth{}, 3, 4, 50.0, rng);
  const ThetaLayout lay{3, 4};
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.size()));
  theta(1) = 0.35;
  theta(2) = 0.15;
  theta(static_cast<Eigen::Index>(lay.sigma2_eps())) = 0.1;
  theta(static_cast<Eigen::Index>(lay.sigma2_beta())) = 0.3;
  const auto a = full_alpha(theta, model);
  REQUIRE(a.size() == 3);
  CHECK(a[2] == Approx(-0.5));
  // Explicit likelihood with the reconstructed alpha.
  double like = 0.0;
  for (int e = 0; e < 3; ++e) {
    for (int p = 0; p < 4; ++p) {
      const double eta = a[std::size_t(e)];
      const auto idx = std::size_t(e * 4 + p);
      like += model.y[idx] * eta - model.n_ep[idx] * std::exp(eta);
    }
  }
  CHECK(log_posterior_terms(theta, model).likelihood == Approx(like).epsilon(1e-12));
}

TEST_CASE("parameter count") {
  RngStream rng(9, 0);
  const auto model = generate_poisson_data(PoissonTruth{}, 3, 20, 1000.0, rng);
  CHECK(model.Ne == 3);
  CHECK(model.Np == 20);
  CHECK(model.y.size() == 60);
  // mu, two free alphas, 20 betas, 60 eps, two variances.
  CHECK(model.dimension() == 1 + 2 + 20 + 60 + 2);
  CHECK_THROWS(generate_poisson_data(PoissonTruth{}, 1, 20, 1000.0, rng));
}

TEST_CASE("zero variances give deterministic rates") {
  PoissonTruth t;
  t.sigma2_eps = 0.0;
  t.sigma2_beta = 0.0;
  std::vector<double> sum(3, 0.0);
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(10, std::uint64_t(r));
    const auto m = generate_poisson_data(t, 3, 1, 20.0, rng);
    for (int e = 0; e < 3; ++e) sum[std::size_t(e)] += m.y[std::size_t(e)];
  }
  const double alpha[] = {0.35, 0.15, -0.5};
  for (int e = 0; e < 3; ++e) {
    const double rate = 20.0 * std::exp(-1.0 + alpha[e]);
    CHECK(std::abs(sum[std::size_t(e)] / reps - rate) < 4.0 * std::sqrt(rate / reps));
  }
}

TEST_CASE("counts follow the lognormal-mixture mean") {
  const PoissonTruth t;
  const int reps = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(11, std::uint64_t(r));
    const auto m = generate_poisson_data(t, 3, 1, 10.0, rng);
    sum += m.y[0];
    sumsq += m.y[0] * m.y[0];
  }
  const double mean_y = sum / reps;
  const double sd = std::sqrt(sumsq / reps - mean_y * mean_y);
  const double expect = 10.0 * std::exp(-1.0 + 0.35 + (0.3 + 0.1) / 2.0);
  CHECK(std::abs(mean_y - expect) < 4.0 * sd / std::sqrt(double(reps)));
}

TEST_CASE("flat target accepts everything") {
  RwmConfig cfg{1.0, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 500, 100};
  RngStream rng(12, 0);
  const auto out = rwm_sample([](const Eigen::VectorXd&) { return 0.0; }, cfg, rng);
  CHECK(out.acceptance_rate == 1.0);
  CHECK(out.chain.rows() == 400);
}

TEST_CASE("RWM config validation") {
  RwmConfig cfg{1.0, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 10, 10};
  RngStream rng(13, 0);
  const LogTarget flat = [](const Eigen::VectorXd&) { return 0.0; };
  CHECK_THROWS(rwm_sample(flat, cfg, rng));
  cfg.burnin = 0;
  cfg.Sigma(0, 0) = -1.0;
  CHECK_THROWS(rwm_sample(flat, cfg, rng));
  cfg.Sigma = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS(rwm_sample([](const Eigen::VectorXd&) { return -INFINITY; }, cfg, rng));
}

TEST_CASE("RWM on a standard normal target") {
  const LogTarget target = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  RwmConfig cfg{1.0, Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1), 60000, 5000};
  RngStream tune(14, 0);
  cfg.kappa = tune_kappa(target, cfg, tune, 0.44);
  RngStream rng(14, 1);
  const auto tr = rwm_trace(target, cfg, 0, rng);
  CHECK(tr.acceptance_rate > 0.3);
  CHECK(tr.acceptance_rate < 0.6);
  const ScalarSeries s(tr.values);
  const double n = double(s.size());
  const double sig = std::sqrt(
      lag_window_estimate(s, Window(WindowKind::Bartlett, 1.0), std::sqrt(n)).gamma_sq);
  CHECK(std::abs(s.mean()) < 4.0 * sig / std::sqrt(n));
}

TEST_CASE("RWM replays bit-identically") {
  const LogTarget target = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  RwmConfig cfg{0.5, Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(3), 300, 0};
  RngStream a(15, 3), b(15, 3);
  CHECK(rwm_sample(target, cfg, a).chain == rwm_sample(target, cfg, b).chain);
}

TEST_CASE("one Metropolis step accepts at the right rate") {
  // From x0 = 1 under a N(0,1) target and N(0,1) proposals, the acceptance probability is
  // E min(1, exp(-(x0 + z)^2/2 + x0^2/2)), integrated numerically here.
  const double x0 = 1.0;
  const double expected = integrate_adaptive_simpson(
      [x0](double z) {
        const double ratio = std::exp(-0.5 * (x0 + z) * (x0 + z) + 0.5 * x0 * x0);
        return std::min(1.0, ratio) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
      },
      -12.0, 12.0, 1e-12);
  const LogTarget target = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  RwmConfig cfg{1.0, Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Constant(1, x0), 1, 0};
  const int reps = 40000;
  int accepted = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(16, std::uint64_t(r));
    accepted += rwm_sample(target, cfg, rng).acceptance_rate == 1.0;
  }
  const double rate = double(accepted) / reps;
  CHECK(std::abs(rate - expected) < 3.0 * std::sqrt(expected * (1 - expected) / reps));
}

TEST_CASE("permutation chain cycles deterministically") {
  oracle::Matrix P = oracle::Matrix::Zero(3, 3);
  P(0, 1) = P(1, 2) = P(2, 0) = 1.0;
  oracle::Vector init = oracle::Vector::Zero(3);
  init(1) = 1.0;
  const oracle::FiniteChain c(P, init);
  RngStream rng(17, 0);
  const auto path = simulate_finite_chain(c, 9, rng);
  for (std::size_t k = 0; k < path.size(); ++k) CHECK(path[k] == int((1 + k) % 3));
}

TEST_CASE("identical rows give iid draws") {
  oracle::Matrix P(3, 3);
  P << 0.2, 0.5, 0.3, 0.2, 0.5, 0.3, 0.2, 0.5, 0.3;
  const oracle::FiniteChain c(P);
  RngStream rng(18, 0);
  const auto path = simulate_finite_chain(c, 60000, rng);
  std::array<double, 3> count{};
  std::array<std::array<double, 3>, 3> pairs{};
  for (std::size_t k = 1; k < path.size(); ++k) {
    count[std::size_t(path[k])] += 1.0;
    pairs[std::size_t(path[k - 1])][std::size_t(path[k])] += 1.0;
  }
  const double n = 60000.0;
  const double p[] = {0.2, 0.5, 0.3};
  for (int i = 0; i < 3; ++i) CHECK(std::abs(count[std::size_t(i)] / n - p[i]) < 4.0 * std::sqrt(p[i] / n));
  // Next state does not depend on the current one.
  for (int i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) row += pairs[std::size_t(i)][std::size_t(j)];
    for (int j = 0; j < 3; ++j) {
      const double f = pairs[std::size_t(i)][std::size_t(j)] / row;
      CHECK(std::abs(f - p[j]) < 4.0 * std::sqrt(p[j] * (1 - p[j]) / row));
    }
  }
}

TEST_CASE("two-state occupation matches the stationary law") {
  oracle::Matrix P = test::two_state_P();
  oracle::Vector pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  const oracle::FiniteChain c(P, pi);
  RngStream rng(19, 0);
  const std::size_t n = 100000;
  const auto path = simulate_finite_chain(c, n, rng);
  double zeros = 0.0;
  for (std::size_t k = 1; k <= n; ++k) zeros += path[k] == 0;
  const double sigma2 = 34.0 / 27.0;  // indicator of state 0 has the same variance
  CHECK(std::abs(zeros / double(n) - 2.0 / 3.0) < 3.0 * std::sqrt(sigma2 / double(n)));
}

TEST_CASE("streams replay and differ") {
  RngStream a(20, 1), b(20, 1), c(20, 2);
  std::vector<double> xa(100), xb(100), xc(100);
  for (int i = 0; i < 100; ++i) {
    xa[std::size_t(i)] = a.normal();
    xb[std::size_t(i)] = b.normal();
    xc[std::size_t(i)] = c.normal();
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
}

}
