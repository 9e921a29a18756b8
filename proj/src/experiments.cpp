#include "lrv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lrv/lagwindow.hpp"
#include "lrv/parallel.hpp"
#include "lrv/rng.hpp"
#include "lrv/stats.hpp"

namespace lrv::experiments {

namespace {

// Tags for derive_seed so the different random inputs of one run never share a stream.
enum SeedTag : std::uint64_t {
  kData = 1,
  kReplicate = 2,
  kCritical = 3,
  kReference = 4,
  kTuning = 5,
  kBootstrap = 6,
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PoissonSetup {
  sampling::PoissonRegModel model;
  sampling::RwmConfig rwm;
  double reference;
};

PoissonSetup prepare_poisson(const ExperimentConfig& cfg, bool need_reference) {
  RngStream data_rng(derive_seed(cfg.seed, kData), 0);
  PoissonSetup setup{sampling::generate_poisson_data(cfg.truth, cfg.ne, cfg.np, cfg.n_ep, data_rng),
                     {},
                     kNaN};
  const sampling::ThetaLayout lay{cfg.ne, cfg.np};
  const auto d = static_cast<Eigen::Index>(lay.size());
  if (cfg.coordinate >= lay.size()) throw std::invalid_argument("traced coordinate out of range");

  Eigen::VectorXd init = Eigen::VectorXd::Zero(d);
  init(static_cast<Eigen::Index>(lay.mu())) = cfg.truth.mu;
  for (int e = 0; e + 1 < cfg.ne; ++e) {
    init(static_cast<Eigen::Index>(lay.alpha(e))) = cfg.truth.alpha[static_cast<std::size_t>(e)];
  }
  init(static_cast<Eigen::Index>(lay.sigma2_eps())) = cfg.truth.sigma2_eps;
  init(static_cast<Eigen::Index>(lay.sigma2_beta())) = cfg.truth.sigma2_beta;

  setup.rwm.Sigma = Eigen::MatrixXd::Identity(d, d);
  setup.rwm.init = init;
  setup.rwm.steps = cfg.burnin + cfg.n;
  setup.rwm.burnin = cfg.burnin;
  const auto& model = setup.model;
  const sampling::LogTarget target = [&model](const Eigen::VectorXd& th) {
    return sampling::log_posterior(th, model);
  };
  RngStream tune_rng(derive_seed(cfg.seed, kTuning), 0);
  setup.rwm.kappa = sampling::tune_kappa(target, setup.rwm, tune_rng);

  if (cfg.reference) {
    setup.reference = *cfg.reference;
  } else if (need_reference) {
    sampling::RwmConfig long_run = setup.rwm;
    long_run.steps = cfg.reference_steps ? cfg.reference_steps : 10 * (cfg.burnin + cfg.n);
    long_run.burnin = std::min(cfg.burnin, long_run.steps - 1);
    RngStream ref_rng(derive_seed(cfg.seed, kReference), 0);
    const auto trace = sampling::rwm_trace(target, long_run, cfg.coordinate, ref_rng);
    setup.reference = mean(trace.values);
  }
  return setup;
}

std::vector<double> series_for(const ExperimentConfig& cfg, const PoissonSetup* poisson,
                               const std::optional<oracle::FiniteChain>& stationary_chain,
                               std::size_t replicate) {
  RngStream rng(derive_seed(cfg.seed, kReplicate), replicate);
  switch (cfg.model) {
    case ModelKind::Garch: {
      const auto path = sampling::simulate_garch(cfg.garch, cfg.n, rng, cfg.burnin);
      std::vector<double> out(cfg.n);
      for (std::size_t k = 1; k <= cfg.n; ++k) out[k - 1] = path.u[k] * path.u[k];
      return out;
    }
    case ModelKind::Finite: {
      const auto path = sampling::simulate_finite_chain(*stationary_chain, cfg.burnin + cfg.n, rng);
      std::vector<double> out(cfg.n);
      for (std::size_t k = 1; k <= cfg.n; ++k) out[k - 1] = cfg.f(path[cfg.burnin + k]);
      return out;
    }
    case ModelKind::PoissonReg: {
      const auto& model = poisson->model;
      const sampling::LogTarget target = [&model](const Eigen::VectorXd& th) {
        return sampling::log_posterior(th, model);
      };
      return sampling::rwm_trace(target, poisson->rwm, cfg.coordinate, rng).values;
    }
  }
  return {};
}

std::optional<oracle::FiniteChain> stationary_version(const ExperimentConfig& cfg) {
  if (cfg.model != ModelKind::Finite) return std::nullopt;
  return oracle::FiniteChain(cfg.chain->P(), oracle::stationary(*cfg.chain));
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Garch: return "garch";
    case ModelKind::PoissonReg: return "poissonreg";
    case ModelKind::Finite: return "finite";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "garch") return ModelKind::Garch;
  if (name == "poissonreg") return ModelKind::PoissonReg;
  if (name == "finite") return ModelKind::Finite;
  throw std::invalid_argument("unknown model: " + std::string(name));
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (deltas.empty() && bs.empty()) throw std::invalid_argument("method grids are empty");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  for (double d : deltas) BandwidthRule::classical(d);
  for (double b : bs) BandwidthRule::fixed_b(b);
  if (model == ModelKind::Garch) garch.validate();
  if (model == ModelKind::Finite) {
    if (!chain) throw std::invalid_argument("finite model needs a transition matrix");
    if (f.size() != chain->states()) throw std::invalid_argument("f must have one value per state");
  }
  if (model == ModelKind::PoissonReg && truth.alpha.size() != static_cast<std::size_t>(ne - 1)) {
    throw std::invalid_argument("Poisson truth needs Ne - 1 alpha values");
  }
}

std::vector<double> simulate_series(const ExperimentConfig& cfg, std::size_t replicate) {
  cfg.validate();
  std::optional<PoissonSetup> poisson;
  if (cfg.model == ModelKind::PoissonReg) poisson = prepare_poisson(cfg, false);
  return series_for(cfg, poisson ? &*poisson : nullptr, stationary_version(cfg), replicate);
}

CoverageResult run_coverage(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<PoissonSetup> poisson;
  double truth = kNaN;
  switch (cfg.model) {
    case ModelKind::Garch: truth = cfg.garch.mean_u2(); break;
    case ModelKind::Finite: truth = oracle::stationary(*cfg.chain).dot(cfg.f); break;
    case ModelKind::PoissonReg:
      poisson = prepare_poisson(cfg, true);
      truth = poisson->reference;
      break;
  }
  const auto chain = stationary_version(cfg);

  const KbConfig kb{cfg.crit_grid, cfg.crit_replications, derive_seed(cfg.seed, kCritical)};
  std::vector<double> critical;
  for (double b : cfg.bs) critical.push_back(critical_value(Window(cfg.window, b), cfg.alpha, kb));
  const double z = normal_quantile(1.0 - cfg.alpha / 2.0);

  const std::size_t methods = cfg.deltas.size() + cfg.bs.size();
  struct Slot {
    bool ok = false;
    bool covered = false;
    double length = 0.0;
    double sigma = 0.0;
  };
  std::vector<Slot> slots(cfg.replications * methods);

  const auto reps = static_cast<std::ptrdiff_t>(cfg.replications);
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < reps; ++r) errors.run([&] {
    const auto rep = static_cast<std::size_t>(r);
    const ScalarSeries s(series_for(cfg, poisson ? &*poisson : nullptr, chain, rep));
    const std::size_t n = s.size();
    const auto gamma = autocovariances(s, n - 1);
    const double center = s.mean();
    auto record = [&](std::size_t m, const Window& w, double c_n, double crit) {
      const double gsq = lag_window_from_autocovariances(gamma, n, w, c_n).gamma_sq;
      Slot& slot = slots[rep * methods + m];
      if (!(gsq > 0.0)) return;
      const double sigma = std::sqrt(gsq);
      const double half = crit * sigma / std::sqrt(static_cast<double>(n));
      slot = {true, center - half <= truth && truth <= center + half, 2.0 * half, sigma};
    };
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
      record(i, Window(cfg.window, 1.0), BandwidthRule::classical(cfg.deltas[i]).bandwidth(n), z);
    }
    for (std::size_t i = 0; i < cfg.bs.size(); ++i) {
      record(cfg.deltas.size() + i, Window(cfg.window, cfg.bs[i]),
             BandwidthRule::fixed_b(cfg.bs[i]).bandwidth(n), critical[i]);
    }
  });
  errors.rethrow();

  CoverageResult out{truth, {}};
  for (std::size_t m = 0; m < methods; ++m) {
    const bool classical = m < cfg.deltas.size();
    CoverageRow row{classical ? CiMethod::Classical : CiMethod::FixedB,
                    classical ? cfg.deltas[m] : cfg.bs[m - cfg.deltas.size()],
                    cfg.window,
                    cfg.n,
                    cfg.replications,
                    0, 0, 0, 0.0, 0.0, 0.0,
                    classical ? z : critical[m - cfg.deltas.size()]};
    double len = 0.0, sig = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const Slot& slot = slots[r * methods + m];
      if (!slot.ok) {
        ++row.failures;
        continue;
      }
      slot.covered ? ++row.covered : ++row.not_covered;
      len += slot.length;
      sig += slot.sigma;
    }
    const auto ok = static_cast<double>(row.covered + row.not_covered);
    row.coverage = ok > 0.0 ? static_cast<double>(row.covered) / ok : 0.0;
    row.avg_length = ok > 0.0 ? len / ok : kNaN;
    row.avg_sigma = ok > 0.0 ? sig / ok : kNaN;
    out.rows.push_back(row);
  }
  return out;
}

double published_quantile(WindowKind kind, double b) {
  const int col = b == 0.3 ? 0 : b == 0.5 ? 1 : b == 0.9 ? 2 : -1;
  if (col < 0) throw std::out_of_range("the published table covers b = 0.3, 0.5, 0.9 only");
  static constexpr double bartlett[] = {2.828, 3.557, 4.735};
  static constexpr double quadratic[] = {4.134, 6.580, 12.575};
  static constexpr double truncated[] = {5.496, 6.299, 13.045};
  switch (kind) {
    case WindowKind::Bartlett: return bartlett[col];
    case WindowKind::Quadratic: return quadratic[col];
    case WindowKind::Truncated: return truncated[col];
    default: throw std::out_of_range("the published table has no Parzen column");
  }
}

std::vector<Table1Row> run_table1(const KbConfig& cfg) {
  std::vector<Table1Row> rows;
  const double alpha[] = {0.05};
  std::uint64_t cell = 0;
  for (auto kind : {WindowKind::Bartlett, WindowKind::Quadratic, WindowKind::Truncated}) {
    for (double b : {0.3, 0.5, 0.9}) {
      const double published = published_quantile(kind, b);
      Table1Row row{kind, b, kNaN, published, kNaN, kNaN, kNaN};
      try {
        const auto table = build_table(Window(kind, b), alpha, cfg, true);
        row.quantile = table.critical_value(0.05);
        row.abs_diff = std::abs(row.quantile - published);
        row.reject_rate = table.nonpositive_rate;
        row.bootstrap_se = bootstrap_quantile_se(table.sorted_samples, 0.975, 200,
                                                 derive_seed(cfg.master_seed, kBootstrap + cell));
      } catch (const RejectionRateExceeded& e) {
        row.reject_rate = e.rate();
      }
      rows.push_back(row);
      ++cell;
    }
  }
  return rows;
}

oracle::FiniteChain two_state_chain() {
  oracle::Matrix P(2, 2);
  P << 0.9, 0.1, 0.2, 0.8;
  oracle::Vector pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  return oracle::FiniteChain(P, pi);
}

std::vector<ConsistencyRow> run_consistency(const ConsistencyConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be at least 1");
  const oracle::FiniteChain chain(cfg.chain.P(), oracle::stationary(cfg.chain));
  const double sigma2 = oracle::exact_sigma2(chain, cfg.f);
  const Window w(cfg.window, 1.0);

  std::vector<ConsistencyRow> rows;
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
      const std::size_t n = cfg.ns[ni];
      const double delta = cfg.deltas[di];
      // delta = 1 is allowed here to show the fixed-b regime (c_n = n).
      if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
      const double c_n = std::pow(static_cast<double>(n), delta);
      const std::uint64_t seed = derive_seed(cfg.seed, 1000 * ni + di);
      std::vector<double> err(cfg.replications), quad(cfg.replications), rn(cfg.replications),
          zeta(cfg.replications);
      const auto reps = static_cast<std::ptrdiff_t>(cfg.replications);
      ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t r = 0; r < reps; ++r) errors.run([&] {
        const auto i = static_cast<std::size_t>(r);
        RngStream rng(seed, i);
        const auto path = sampling::simulate_finite_chain(chain, n, rng);
        if (cfg.decomposition) {
          const auto rep = oracle::decomposition_report(path, w, c_n, chain, cfg.f,
                                                        oracle::ZetaMode::Implicit);
          err[i] = std::abs(rep.gamma_sq - sigma2);
          quad[i] = std::abs(rep.term_quad);
          rn[i] = std::abs(rep.term_rn);
          zeta[i] = std::abs(rep.term_zeta);
        } else {
          std::vector<double> h(n);
          for (std::size_t k = 1; k <= n; ++k) h[k - 1] = cfg.f(path[k]);
          err[i] = std::abs(lag_window_estimate(ScalarSeries(std::move(h)), w, c_n).gamma_sq - sigma2);
          quad[i] = rn[i] = zeta[i] = kNaN;
        }
      });
      errors.rethrow();
      rows.push_back({n, delta, c_n, cfg.replications, sigma2, median(err),
                      cfg.decomposition ? median(quad) : kNaN,
                      cfg.decomposition ? median(rn) : kNaN,
                      cfg.decomposition ? median(zeta) : kNaN});
    }
  }
  return rows;
}

void write_coverage_csv(std::ostream& out, const ExperimentConfig& cfg, const CoverageResult& r) {
  out << std::setprecision(10);
  out << "# experiment=coverage model=" << to_string(cfg.model) << " seed=" << cfg.seed
      << " n=" << cfg.n << " burnin=" << cfg.burnin << " reps=" << cfg.replications
      << " window=" << to_string(cfg.window) << " alpha=" << cfg.alpha << " deltas="
      << join(cfg.deltas) << " bs=" << join(cfg.bs) << " crit_reps=" << cfg.crit_replications
      << " crit_grid=" << cfg.crit_grid << " truth=" << r.truth << '\n';
  out << "method,param,window,n,reps,seed,covered,not_covered,failures,coverage,avg_length,"
         "avg_sigma,critical\n";
  for (const auto& row : r.rows) {
    out << to_string(row.method) << ',' << row.param << ',' << to_string(row.window) << ','
        << row.n << ',' << row.replications << ',' << cfg.seed << ',' << row.covered << ','
        << row.not_covered << ',' << row.failures << ',' << row.coverage << ',' << row.avg_length
        << ',' << row.avg_sigma << ',' << row.critical << '\n';
  }
}

void write_table1_csv(std::ostream& out, const KbConfig& cfg, const std::vector<Table1Row>& rows) {
  out << std::setprecision(10);
  out << "# experiment=table1 reps=" << cfg.replications << " grid=" << cfg.grid_steps
      << " seed=" << cfg.master_seed << " nonpositive=" << to_string(cfg.nonpositive)
      << " alpha=0.05\n";
  out << "window,b,quantile,published,abs_diff,bootstrap_se,reject_rate,reps,grid,seed\n";
  for (const auto& row : rows) {
    out << to_string(row.window) << ',' << row.b << ',' << row.quantile << ',' << row.published << ','
        << row.abs_diff << ',' << row.bootstrap_se << ',' << row.reject_rate << ','
        << cfg.replications << ',' << cfg.grid_steps << ',' << cfg.master_seed << '\n';
  }
}

void write_consistency_csv(std::ostream& out, const ConsistencyConfig& cfg,
                           const std::vector<ConsistencyRow>& rows) {
  out << std::setprecision(10);
  out << "# experiment=consistency seed=" << cfg.seed << " reps=" << cfg.replications
      << " window=" << to_string(cfg.window) << '\n';
  out << "n,delta,c_n,reps,seed,window,sigma2,median_abs_error,median_abs_quad,median_abs_rn,"
         "median_abs_zeta\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.delta << ',' << row.c_n << ',' << row.replications << ','
        << cfg.seed << ',' << to_string(cfg.window) << ',' << row.sigma2 << ','
        << row.median_abs_error << ',' << row.median_abs_quad << ',' << row.median_abs_rn << ','
        << row.median_abs_zeta << '\n';
  }
}

}  // namespace lrv::experiments
