#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lrv/chain_oracle.hpp"
#include "lrv/rng.hpp"

namespace lrv::sampling {

// ---------------------------------------------------------------------------
// GARCH(1,1)

/// u_k = sqrt(h_k) eps_k,  h_k = omega + beta h_{k-1} + alpha u_{k-1}^2.
/// E[(beta + alpha Z^2)^nu] < 1 for some nu > 0 is assumed, not checked.
struct GarchParams {
  double omega = 1.0;
  double alpha = 0.1;
  double beta = 0.7;
  double h0 = 1.0;

  void validate() const;
  /// omega / (1 - alpha - beta), the stationary mean of u^2 when alpha + beta < 1.
  double mean_u2() const;
};

struct GarchPath {
  std::vector<double> u;  // u_0..u_n
  std::vector<double> h;  // h_0..h_n
};

/// u_0 ~ N(0, h0) then n recursion steps; the first `burnin` steps are simulated and dropped
/// (the returned path then starts at the state reached after burn-in).
GarchPath simulate_garch(const GarchParams& p, std::size_t n, RngStream& rng,
                         std::size_t burnin = 0);

/// Same recursion driven by the given innovations eps_0..eps_n.
GarchPath simulate_garch(const GarchParams& p, std::span<const double> eps);

// ---------------------------------------------------------------------------
// Poisson log-linear model

/// Counts y_{ep} ~ Poisson(n_{ep} exp(mu + alpha_e + beta_p + eps_{ep})), stored e-major.
struct PoissonRegModel {
  int Ne = 0;
  int Np = 0;
  std::vector<double> y;
  std::vector<double> n_ep;

  void validate() const;
  /// 1 + (Ne-1) + Np + Ne*Np + 2.
  std::size_t dimension() const noexcept;
};

/// Index helpers for the flat parameter vector
/// [mu, alpha_1..alpha_{Ne-1}, beta_1..beta_Np, eps (e-major), sigma2_eps, sigma2_beta].
struct ThetaLayout {
  int Ne;
  int Np;
  std::size_t mu() const noexcept { return 0; }
  std::size_t alpha(int e) const noexcept { return 1 + static_cast<std::size_t>(e); }
  std::size_t beta(int p) const noexcept { return static_cast<std::size_t>(Ne + p); }
  std::size_t eps(int e, int p) const noexcept {
    return static_cast<std::size_t>(Ne + Np + e * Np + p);
  }
  std::size_t sigma2_eps() const noexcept { return static_cast<std::size_t>(Ne + Np + Ne * Np); }
  std::size_t sigma2_beta() const noexcept { return sigma2_eps() + 1; }
  std::size_t size() const noexcept { return sigma2_beta() + 1; }
};

struct LogPosteriorTerms {
  double likelihood;     // sum y eta - n exp(eta)
  double eps_penalty;    // sum eps^2 / (2 sigma2_eps)
  double beta_penalty;   // sum beta^2 / (2 sigma2_beta)
  double log_variances;  // (Ne Np / 2) log sigma2_eps + (Np / 2) log sigma2_beta
  double total() const noexcept {
    return likelihood - eps_penalty - beta_penalty - log_variances;
  }
};

/// alpha_e for e = 0..Ne-1, with the last level fixed by the sum-to-zero constraint.
std::vector<double> full_alpha(const Eigen::VectorXd& theta, const PoissonRegModel& model);

LogPosteriorTerms log_posterior_terms(const Eigen::VectorXd& theta, const PoissonRegModel& model);

/// Unnormalised log posterior under flat priors; -inf when a variance is not positive.
double log_posterior(const Eigen::VectorXd& theta, const PoissonRegModel& model);

struct PoissonTruth {
  double mu = -1.0;
  std::vector<double> alpha{0.35, 0.15};  // alpha_1..alpha_{Ne-1}
  double sigma2_eps = 0.1;
  double sigma2_beta = 0.3;
};

PoissonRegModel generate_poisson_data(const PoissonTruth& truth, int Ne, int Np, double n_ep,
                                      RngStream& rng);

// ---------------------------------------------------------------------------
// Random-walk Metropolis

using LogTarget = std::function<double(const Eigen::VectorXd&)>;

struct RwmConfig {
  double kappa = 1.0;
  Eigen::MatrixXd Sigma;
  Eigen::VectorXd init;
  std::size_t steps = 0;
  std::size_t burnin = 0;

  void validate() const;
};

struct RwmResult {
  Eigen::MatrixXd chain;  // one row per retained step
  double acceptance_rate;
};

struct RwmTrace {
  std::vector<double> values;  // one coordinate, one entry per retained step
  double acceptance_rate;
};

/// theta' = theta + sqrt(kappa) L z with L L^T = Sigma; accepted with prob min(1, exp(delta)).
RwmResult rwm_sample(const LogTarget& log_target, const RwmConfig& cfg, RngStream& rng);

/// Same chain, keeping a single coordinate.
RwmTrace rwm_trace(const LogTarget& log_target, const RwmConfig& cfg, std::size_t coordinate,
                   RngStream& rng);

/// Pilot runs from cfg.init adjusting log kappa toward the target acceptance rate.
double tune_kappa(const LogTarget& log_target, const RwmConfig& cfg, RngStream& rng,
                  double target = 0.234, int rounds = 20, std::size_t pilot_steps = 500);

// ---------------------------------------------------------------------------
// Finite chains

/// X_0 ~ initial, X_{k+1} ~ P(X_k, .) by inverse CDF; returns X_0..X_n.
oracle::Path simulate_finite_chain(const oracle::FiniteChain& chain, std::size_t n,
                                   RngStream& rng);

}  // namespace lrv::sampling
