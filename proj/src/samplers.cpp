#include "lrv/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/random/poisson_distribution.hpp>

namespace lrv::sampling {

void GarchParams::validate() const {
  if (!(omega > 0.0) || !(alpha >= 0.0) || !(beta >= 0.0) || !(h0 > 0.0) ||
      !std::isfinite(omega + alpha + beta + h0)) {
    throw std::invalid_argument("GARCH needs omega > 0, alpha >= 0, beta >= 0, h0 > 0");
  }
}

double GarchParams::mean_u2() const {
  if (!(alpha + beta < 1.0)) throw std::domain_error("E[u^2] is infinite when alpha + beta >= 1");
  return omega / (1.0 - alpha - beta);
}

GarchPath simulate_garch(const GarchParams& p, std::span<const double> eps) {
  p.validate();
  if (eps.empty()) throw std::invalid_argument("need at least eps_0");
  const std::size_t len = eps.size();
  GarchPath out{std::vector<double>(len), std::vector<double>(len)};
  out.h[0] = p.h0;
  out.u[0] = std::sqrt(p.h0) * eps[0];
  for (std::size_t k = 1; k < len; ++k) {
    out.h[k] = p.omega + p.beta * out.h[k - 1] + p.alpha * out.u[k - 1] * out.u[k - 1];
    out.u[k] = std::sqrt(out.h[k]) * eps[k];
  }
  return out;
}

GarchPath simulate_garch(const GarchParams& p, std::size_t n, RngStream& rng, std::size_t burnin) {
  p.validate();
  if (n < 1) throw std::invalid_argument("GARCH path needs n >= 1");
  std::vector<double> eps(n + burnin + 1);
  for (auto& e : eps) e = rng.normal();
  GarchPath full = simulate_garch(p, eps);
  if (burnin == 0) return full;
  const auto cut = static_cast<std::ptrdiff_t>(burnin);
  return {std::vector<double>(full.u.begin() + cut, full.u.end()),
          std::vector<double>(full.h.begin() + cut, full.h.end())};
}

void PoissonRegModel::validate() const {
  if (Ne < 1 || Np < 1) throw std::invalid_argument("Poisson model needs Ne, Np >= 1");
  const auto cells = static_cast<std::size_t>(Ne) * static_cast<std::size_t>(Np);
  if (y.size() != cells || n_ep.size() != cells) {
    throw std::invalid_argument("counts and exposures must have Ne * Np entries");
  }
  for (std::size_t i = 0; i < cells; ++i) {
    if (!(y[i] >= 0.0) || y[i] != std::floor(y[i])) {
      throw std::invalid_argument("counts must be nonnegative integers");
    }
    if (!(n_ep[i] > 0.0) || !std::isfinite(n_ep[i])) {
      throw std::invalid_argument("exposures must be positive");
    }
  }
}

std::size_t PoissonRegModel::dimension() const noexcept {
  return ThetaLayout{Ne, Np}.size();
}

std::vector<double> full_alpha(const Eigen::VectorXd& theta, const PoissonRegModel& model) {
  const ThetaLayout lay{model.Ne, model.Np};
  std::vector<double> alpha(static_cast<std::size_t>(model.Ne), 0.0);
  double sum = 0.0;
  for (int e = 0; e + 1 < model.Ne; ++e) {
    alpha[static_cast<std::size_t>(e)] = theta(static_cast<Eigen::Index>(lay.alpha(e)));
    sum += alpha[static_cast<std::size_t>(e)];
  }
  alpha.back() = -sum;
  return alpha;
}

LogPosteriorTerms log_posterior_terms(const Eigen::VectorXd& theta, const PoissonRegModel& model) {
  const ThetaLayout lay{model.Ne, model.Np};
  if (static_cast<std::size_t>(theta.size()) != lay.size()) {
    throw std::invalid_argument("parameter vector has the wrong dimension");
  }
  auto at = [&theta](std::size_t i) { return theta(static_cast<Eigen::Index>(i)); };
  const double s2e = at(lay.sigma2_eps());
  const double s2b = at(lay.sigma2_beta());
  const auto alpha = full_alpha(theta, model);

  LogPosteriorTerms t{};
  for (int e = 0; e < model.Ne; ++e) {
    for (int p = 0; p < model.Np; ++p) {
      const auto cell = static_cast<std::size_t>(e * model.Np + p);
      const double eps = at(lay.eps(e, p));
      const double eta = at(lay.mu()) + alpha[static_cast<std::size_t>(e)] + at(lay.beta(p)) + eps;
      t.likelihood += model.y[cell] * eta - model.n_ep[cell] * std::exp(eta);
      t.eps_penalty += eps * eps;
    }
  }
  double beta_sq = 0.0;
  for (int p = 0; p < model.Np; ++p) beta_sq += at(lay.beta(p)) * at(lay.beta(p));
  t.eps_penalty /= 2.0 * s2e;
  t.beta_penalty = beta_sq / (2.0 * s2b);
  t.log_variances = 0.5 * model.Ne * model.Np * std::log(s2e) + 0.5 * model.Np * std::log(s2b);
  return t;
}

double log_posterior(const Eigen::VectorXd& theta, const PoissonRegModel& model) {
  const ThetaLayout lay{model.Ne, model.Np};
  if (static_cast<std::size_t>(theta.size()) != lay.size()) {
    throw std::invalid_argument("parameter vector has the wrong dimension");
  }
  if (!(theta(static_cast<Eigen::Index>(lay.sigma2_eps())) > 0.0) ||
      !(theta(static_cast<Eigen::Index>(lay.sigma2_beta())) > 0.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  return log_posterior_terms(theta, model).total();
}

PoissonRegModel generate_poisson_data(const PoissonTruth& truth, int Ne, int Np, double n_ep,
                                      RngStream& rng) {
  if (Ne < 2 || Np < 1) throw std::invalid_argument("need Ne >= 2 and Np >= 1");
  if (truth.alpha.size() != static_cast<std::size_t>(Ne - 1)) {
    throw std::invalid_argument("truth must give Ne - 1 free alpha values");
  }
  if (!(truth.sigma2_eps >= 0.0) || !(truth.sigma2_beta >= 0.0) || !(n_ep > 0.0)) {
    throw std::invalid_argument("variances must be nonnegative and n_ep positive");
  }
  std::vector<double> alpha(truth.alpha);
  double sum = 0.0;
  for (double a : alpha) sum += a;
  alpha.push_back(-sum);

  std::vector<double> beta(static_cast<std::size_t>(Np));
  for (auto& b : beta) b = std::sqrt(truth.sigma2_beta) * rng.normal();

  PoissonRegModel model{Ne, Np, {}, {}};
  const auto cells = static_cast<std::size_t>(Ne * Np);
  model.y.resize(cells);
  model.n_ep.assign(cells, n_ep);
  for (int e = 0; e < Ne; ++e) {
    for (int p = 0; p < Np; ++p) {
      const double eps = std::sqrt(truth.sigma2_eps) * rng.normal();
      const double rate = n_ep * std::exp(truth.mu + alpha[static_cast<std::size_t>(e)] +
                                          beta[static_cast<std::size_t>(p)] + eps);
      boost::random::poisson_distribution<long, double> pois(rate);
      model.y[static_cast<std::size_t>(e * Np + p)] = static_cast<double>(pois(rng));
    }
  }
  return model;
}

void RwmConfig::validate() const {
  const auto d = init.size();
  if (d == 0) throw std::invalid_argument("RWM needs a nonempty initial state");
  if (Sigma.rows() != d || Sigma.cols() != d) {
    throw std::invalid_argument("proposal covariance must be d x d");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (burnin >= steps) throw std::invalid_argument("burnin must be smaller than steps");
  if ((Sigma - Sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Sigma.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("proposal covariance must be symmetric");
  }
}

namespace {

// Runs the chain and hands each retained state to `keep`.
template <typename Keep>
double run_rwm(const LogTarget& log_target, const RwmConfig& cfg, RngStream& rng, Keep&& keep) {
  cfg.validate();
  const Eigen::LLT<Eigen::MatrixXd> llt(cfg.Sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("proposal covariance must be positive definite");
  }
  const Eigen::MatrixXd step = std::sqrt(cfg.kappa) * llt.matrixL().toDenseMatrix();
  const auto d = cfg.init.size();

  Eigen::VectorXd current = cfg.init;
  double current_lp = log_target(current);
  if (!std::isfinite(current_lp)) throw std::invalid_argument("log target is not finite at init");

  Eigen::VectorXd z(d), proposal(d);
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < cfg.steps; ++it) {
    for (Eigen::Index i = 0; i < d; ++i) z(i) = rng.normal();
    proposal.noalias() = current + step * z;
    const double lp = log_target(proposal);
    const double u = rng.uniform();
    const bool accept = !std::isnan(lp) && std::log(u) < lp - current_lp;
    if (accept) {
      current.swap(proposal);
      current_lp = lp;
    }
    if (it >= cfg.burnin) {
      if (accept) ++accepted;
      keep(current);
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(cfg.steps - cfg.burnin);
}

}  // namespace

RwmResult rwm_sample(const LogTarget& log_target, const RwmConfig& cfg, RngStream& rng) {
  RwmResult out{Eigen::MatrixXd(static_cast<Eigen::Index>(cfg.steps - std::min(cfg.burnin, cfg.steps)),
                                cfg.init.size()),
                0.0};
  Eigen::Index row = 0;
  out.acceptance_rate =
      run_rwm(log_target, cfg, rng, [&](const Eigen::VectorXd& x) { out.chain.row(row++) = x; });
  return out;
}

RwmTrace rwm_trace(const LogTarget& log_target, const RwmConfig& cfg, std::size_t coordinate,
                   RngStream& rng) {
  if (coordinate >= static_cast<std::size_t>(cfg.init.size())) {
    throw std::out_of_range("trace coordinate out of range");
  }
  RwmTrace out{{}, 0.0};
  out.values.reserve(cfg.steps > cfg.burnin ? cfg.steps - cfg.burnin : 0);
  const auto c = static_cast<Eigen::Index>(coordinate);
  out.acceptance_rate =
      run_rwm(log_target, cfg, rng, [&](const Eigen::VectorXd& x) { out.values.push_back(x(c)); });
  return out;
}

double tune_kappa(const LogTarget& log_target, const RwmConfig& cfg, RngStream& rng,
                  double target, int rounds, std::size_t pilot_steps) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target rate in (0, 1)");
  RwmConfig pilot = cfg;
  pilot.steps = pilot_steps;
  pilot.burnin = 0;
  double log_kappa = std::log(cfg.kappa);
  for (int r = 0; r < rounds; ++r) {
    pilot.kappa = std::exp(log_kappa);
    Eigen::VectorXd last = pilot.init;
    const double rate =
        run_rwm(log_target, pilot, rng, [&last](const Eigen::VectorXd& x) { last = x; });
    pilot.init = last;
    // Near-zero acceptance means the scale is off by orders of magnitude: cut hard.
    if (rate < 0.02) {
      log_kappa -= std::log(10.0);
    } else {
      log_kappa += 3.0 * (rate - target);
    }
  }
  return std::exp(log_kappa);
}

oracle::Path simulate_finite_chain(const oracle::FiniteChain& chain, std::size_t n,
                                   RngStream& rng) {
  const int s = chain.states();
  std::vector<double> cdf(static_cast<std::size_t>(s) * static_cast<std::size_t>(s + 1));
  // Row r occupies cdf[r*s .. r*s + s); the initial law sits in the extra last row.
  auto fill = [&](std::size_t row, auto prob) {
    double acc = 0.0;
    for (int k = 0; k < s; ++k) {
      acc += prob(k);
      cdf[row * static_cast<std::size_t>(s) + static_cast<std::size_t>(k)] = acc;
    }
  };
  for (int r = 0; r < s; ++r) {
    fill(static_cast<std::size_t>(r), [&](int k) { return chain.P()(r, k); });
  }
  fill(static_cast<std::size_t>(s), [&](int k) { return chain.initial()(k); });

  auto draw = [&](std::size_t row) {
    const auto begin = cdf.begin() + static_cast<std::ptrdiff_t>(row * static_cast<std::size_t>(s));
    const auto end = begin + s;
    const double total = *(end - 1);
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(begin, end, u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - begin, s - 1));
  };

  oracle::Path path(n + 1);
  path[0] = draw(static_cast<std::size_t>(s));
  for (std::size_t k = 1; k <= n; ++k) path[k] = draw(static_cast<std::size_t>(path[k - 1]));
  return path;
}

}  // namespace lrv::sampling
