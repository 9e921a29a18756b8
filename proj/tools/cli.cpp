#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lrv/chain_oracle.hpp"
#include "lrv/ci.hpp"
#include "lrv/experiments.hpp"
#include "lrv/fixedb.hpp"
#include "lrv/io.hpp"
#include "lrv/lagwindow.hpp"
#include "lrv/samplers.hpp"
#include "lrv/ustat.hpp"

namespace lrv::cli {

namespace {

using oracle::Matrix;
using oracle::Vector;

struct Common {
  std::string out_path;
};

// Output sink: the --out file when given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
    *stream_ << std::setprecision(12);
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::vector<double> load_series(const std::string& input) {
  if (input.empty() || input == "-") return io::read_series(std::cin);
  return io::read_series_file(input);
}

oracle::FiniteChain load_chain(const std::string& path) {
  if (path.empty()) return experiments::two_state_chain();
  return oracle::FiniteChain(io::read_matrix_csv_file(path));
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Default functional: indicator of the last state (state 1 for the two-state chain).
Vector functional_or_default(const std::vector<double>& f, int states) {
  if (!f.empty()) {
    if (static_cast<int>(f.size()) != states) {
      throw std::invalid_argument("--f needs one value per state");
    }
    return to_vector(f);
  }
  Vector v = Vector::Zero(states);
  v(states - 1) = 1.0;
  return v;
}

Matrix kernel_or_product(const std::string& path, const Vector& f) {
  if (!path.empty()) return io::read_matrix_csv_file(path);
  return f * f.transpose();
}

CLI::App* add_window_options(CLI::App* sub, WindowKind& kind, double& b, double b_default) {
  b = b_default;
  sub->add_option_function<std::string>(
         "--window", [&kind](const std::string& name) { kind = parse_window_kind(name); },
         "bartlett|quadratic|truncated|parzen (default bartlett)")
      ->check(CLI::IsMember({"bartlett", "quadratic", "truncated", "parzen"}, CLI::ignore_case));
  sub->add_option("--b", b, "window support parameter")->capture_default_str();
  return sub;
}

void add_out(CLI::App* sub, Common& common) {
  sub->add_option("--out", common.out_path, "write CSV here instead of stdout");
  // Consumed by expand_config before parsing; declared here so it shows in --help.
  sub->add_option("--config")->description("key=value configuration file; command-line options win");
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  WindowKind window = WindowKind::Bartlett;
  double b = 1.0;
  std::string rule = "delta:0.5";
};

void cmd_estimate(const EstimateArgs& a, const Common& c, std::ostream& out) {
  const ScalarSeries s(load_series(a.input));
  const auto rule = BandwidthRule::parse(a.rule, a.b);
  const double b = rule.is_fixed_b() ? rule.parameter() : a.b;
  const auto est = lag_window_estimate(s, Window(a.window, b), rule.bandwidth(s.size()));
  Sink sink(c.out_path, out);
  *sink << "gamma_sq,gamma0,c_n\n" << est.gamma_sq << ',' << est.gamma0 << ',' << est.c_n << '\n';
}

struct CiArgs {
  std::string input;
  std::string method = "classical";
  double delta = 0.5;
  WindowKind window = WindowKind::Bartlett;
  double b = 0.5;
  double alpha = 0.05;
  std::optional<double> critical;
  std::size_t reps = 200000;
  std::size_t grid = 2000;
  std::optional<std::uint64_t> seed;
};

void cmd_ci(const CiArgs& a, const Common& c, std::ostream& out) {
  const ScalarSeries s(load_series(a.input));
  ConfidenceInterval ci{};
  if (a.method == "classical") {
    ci = classical_ci(s, a.alpha, a.delta, a.window);
  } else {
    double crit = 0.0;
    if (a.critical) {
      crit = *a.critical;
    } else {
      if (!a.seed) throw std::invalid_argument("--seed is required to simulate critical values");
      crit = critical_value(Window(a.window, a.b), a.alpha, KbConfig{a.grid, a.reps, *a.seed});
    }
    ci = fixedb_ci(s, a.alpha, a.b, a.window, crit);
  }
  Sink sink(c.out_path, out);
  *sink << "center,lower,upper,half_width,sigma_hat,method,param\n"
        << ci.center << ',' << ci.lower << ',' << ci.upper << ',' << ci.half_width << ','
        << ci.sigma_hat << ',' << to_string(ci.method) << ',' << ci.param << '\n';
}

void add_nonpositive_option(CLI::App* sub, NonpositiveK& policy) {
  sub->add_option_function<std::string>(
         "--nonpositive", [&policy](const std::string& name) { policy = parse_nonpositive(name); },
         "handling of K <= 0 draws: auto, reject or absolute (default auto)")
      ->check(CLI::IsMember({"auto", "reject", "absolute"}, CLI::ignore_case));
}

struct CritArgs {
  double max_reject = 0.01;
  NonpositiveK nonpositive = NonpositiveK::Auto;
  WindowKind window = WindowKind::Bartlett;
  double b = 0.5;
  std::vector<double> alphas{0.05};
  std::size_t reps = 200000;
  std::size_t grid = 2000;
  std::uint64_t seed = 0;
};

void cmd_critvals(const CritArgs& a, const Common& c, std::ostream& out) {
  const KbConfig cfg{a.grid, a.reps, a.seed, a.max_reject, a.nonpositive};
  const auto table = build_table(Window(a.window, a.b), a.alphas, cfg);
  Sink sink(c.out_path, out);
  *sink << "window,b,alpha,quantile,reps,grid,seed,reject_rate\n";
  for (const auto& [alpha, q] : table.quantiles) {
    *sink << to_string(a.window) << ',' << a.b << ',' << alpha << ',' << q << ',' << a.reps << ','
          << a.grid << ',' << a.seed << ',' << table.nonpositive_rate << '\n';
  }
}

struct Table1Args {
  double max_reject = 0.01;
  NonpositiveK nonpositive = NonpositiveK::Auto;
  std::size_t reps = 200000;
  std::size_t grid = 2000;
  std::uint64_t seed = 0;
};

void cmd_table1(const Table1Args& a, const Common& c, std::ostream& out) {
  const KbConfig cfg{a.grid, a.reps, a.seed, a.max_reject, a.nonpositive};
  const auto rows = experiments::run_table1(cfg);
  Sink sink(c.out_path, out);
  experiments::write_table1_csv(*sink, cfg, rows);
}

struct CoverageArgs {
  std::string model = "garch";
  std::string chain;
  std::vector<double> f;
  double omega = 1.0, g_alpha = 0.1, g_beta = 0.7;
  int ne = 3, np = 20;
  double n_ep = 1000.0;
  std::size_t coordinate = 1;
  std::optional<double> reference;
  std::size_t reference_steps = 0;
  std::size_t n = 20000, burnin = 4000, reps = 200;
  std::vector<double> deltas{0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> bs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  WindowKind window = WindowKind::Bartlett;
  double b_unused = 1.0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t crit_reps = 50000, crit_grid = 2000;
};

experiments::ExperimentConfig to_config(const CoverageArgs& a) {
  experiments::ExperimentConfig cfg;
  cfg.model = experiments::parse_model_kind(a.model);
  cfg.garch = {a.omega, a.g_alpha, a.g_beta, 1.0};
  if (cfg.model == experiments::ModelKind::Finite) {
    cfg.chain = load_chain(a.chain);
    cfg.f = functional_or_default(a.f, cfg.chain->states());
  }
  cfg.ne = a.ne;
  cfg.np = a.np;
  cfg.n_ep = a.n_ep;
  cfg.coordinate = a.coordinate;
  cfg.reference = a.reference;
  cfg.reference_steps = a.reference_steps;
  cfg.n = a.n;
  cfg.burnin = a.burnin;
  cfg.replications = a.reps;
  cfg.deltas = a.deltas;
  cfg.bs = a.bs;
  cfg.window = a.window;
  cfg.alpha = a.alpha;
  cfg.seed = a.seed;
  cfg.crit_replications = a.crit_reps;
  cfg.crit_grid = a.crit_grid;
  return cfg;
}

void cmd_coverage(const CoverageArgs& a, const Common& c, std::ostream& out) {
  const auto cfg = to_config(a);
  const auto result = experiments::run_coverage(cfg);
  Sink sink(c.out_path, out);
  experiments::write_coverage_csv(*sink, cfg, result);
}

void cmd_simulate(const CoverageArgs& a, const Common& c, std::ostream& out) {
  auto cfg = to_config(a);
  cfg.replications = 1;
  const auto series = experiments::simulate_series(cfg, 0);
  Sink sink(c.out_path, out);
  *sink << "# model=" << a.model << " n=" << a.n << " burnin=" << a.burnin << " seed=" << a.seed
        << '\n'
        << "value\n";
  for (double v : series) *sink << v << '\n';
}

struct ConsistencyArgs {
  std::string chain;
  std::vector<double> f;
  std::vector<std::size_t> ns{1000, 10000, 100000};
  std::vector<double> deltas{0.6};
  std::size_t reps = 100;
  WindowKind window = WindowKind::Bartlett;
  double b_unused = 1.0;
  std::uint64_t seed = 0;
  bool no_decomposition = false;
};

void cmd_consistency(const ConsistencyArgs& a, const Common& c, std::ostream& out) {
  const auto chain = load_chain(a.chain);
  experiments::ConsistencyConfig cfg{chain, functional_or_default(a.f, chain.states())};
  cfg.ns = a.ns;
  cfg.deltas = a.deltas;
  cfg.replications = a.reps;
  cfg.window = a.window;
  cfg.seed = a.seed;
  cfg.decomposition = !a.no_decomposition;
  const auto rows = experiments::run_consistency(cfg);
  Sink sink(c.out_path, out);
  experiments::write_consistency_csv(*sink, cfg, rows);
}

struct OracleArgs {
  std::string chain;
  std::string check = "poisson";
  std::vector<double> f;
  std::string kernel;
  std::size_t n = 500;
  std::size_t paths = 100;
  std::uint64_t seed = 1;
  WindowKind window = WindowKind::Bartlett;
  double b = 1.0;
  double delta = 0.5;
};

void cmd_oracle(const OracleArgs& a, const Common& c, std::ostream& out) {
  const auto chain = load_chain(a.chain);
  const Vector f = functional_or_default(a.f, chain.states());
  Sink sink(c.out_path, out);
  if (a.check == "poisson") {
    const auto sol = oracle::poisson_solve(chain, f);
    const Vector pi = oracle::stationary(chain);
    const auto s2 = oracle::exact_sigma2_both(chain, f);
    const auto s = chain.states();
    *sink << "metric,value\n"
          << "poisson_residual,"
          << ((Matrix::Identity(s, s) - chain.P()) * sol.G - sol.h).cwiseAbs().maxCoeff() << '\n'
          << "pi_dot_G," << pi.dot(sol.G) << '\n'
          << "stationary_residual," << (pi.transpose() * chain.P() - pi.transpose()).cwiseAbs().maxCoeff()
          << '\n'
          << "sigma2_via_poisson," << s2.via_poisson << '\n'
          << "sigma2_via_increments," << s2.via_increments << '\n';
    return;
  }
  if (a.check == "bivariate") {
    const auto sol = oracle::bivariate_poisson_solve(chain, kernel_or_product(a.kernel, f));
    *sink << "metric,value\n"
          << "theta," << sol.theta << '\n'
          << "bivariate_residual," << oracle::verify_bivariate_poisson(sol, chain) << '\n'
          << "martingale_residual," << oracle::verify_martingale_property(sol, chain) << '\n';
    return;
  }
  const oracle::FiniteChain stat(chain.P(), oracle::stationary(chain));
  if (a.check == "decomp") {
    const Window w(a.window, a.b);
    const double c_n = BandwidthRule::classical(a.delta).bandwidth(a.n);
    *sink << "path,gamma_sq,term_diag,term_quad,term_rn,term_zeta,residual\n";
    for (std::size_t p = 0; p < a.paths; ++p) {
      RngStream rng(a.seed, p);
      const auto path = sampling::simulate_finite_chain(stat, a.n, rng);
      const auto r = oracle::decomposition_report(path, w, c_n, chain, f);
      *sink << p << ',' << r.gamma_sq << ',' << r.term_diag << ',' << r.term_quad << ','
            << r.term_rn << ',' << r.term_zeta << ',' << r.residual << '\n';
    }
    return;
  }
  if (a.check == "lemma2") {
    const Matrix h = kernel_or_product(a.kernel, f);
    const oracle::WeightFn ustat_weights = [](long l, long j) { return l != j ? 1.0 : 0.0; };
    *sink << "path,u_n,u_n0,linear,diagonal,quadratic,zeta_explicit,zeta_implicit\n";
    for (std::size_t p = 0; p < a.paths; ++p) {
      RngStream rng(a.seed, p);
      const auto path = sampling::simulate_finite_chain(stat, a.n, rng);
      const auto t = oracle::lemma2_terms(path, ustat_weights, h, chain);
      *sink << p << ',' << t.u_n << ',' << t.u_n0 << ',' << t.linear << ',' << t.diagonal << ','
            << t.quadratic << ',' << t.zeta_explicit << ',' << t.zeta_implicit << '\n';
    }
    return;
  }
  throw std::invalid_argument("--check must be poisson, bivariate, decomp or lemma2");
}

struct UstatArgs {
  std::string chain;
  std::string kernel;
  std::vector<double> f;
  std::size_t n = 5000;
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
};

void cmd_ustat(const UstatArgs& a, const Common& c, std::ostream& out) {
  const auto chain = load_chain(a.chain);
  const oracle::FiniteChain stat(chain.P(), oracle::stationary(chain));
  Matrix h;
  if (!a.kernel.empty()) {
    h = io::read_matrix_csv_file(a.kernel);
  } else {
    // h(x, y) = f(x) + f(y)
    const Vector f = functional_or_default(a.f, chain.states());
    h = f * Vector::Ones(f.size()).transpose() + Vector::Ones(f.size()) * f.transpose();
  }
  const auto norm = ustat::clt_normalization(stat, h, a.n);
  Sink sink(c.out_path, out);
  *sink << "# n=" << a.n << " reps=" << a.reps << " seed=" << a.seed << " theta=" << norm.theta
        << " sigma_n1_sq=" << norm.sigma_n1_sq << '\n'
        << "replicate,standardized,linear\n";
  for (std::size_t r = 0; r < a.reps; ++r) {
    RngStream rng(a.seed, r);
    const auto path = sampling::simulate_finite_chain(stat, a.n, rng);
    const auto res = ustat::clt_normalize(path, stat, h);
    *sink << r << ',' << res.standardized << ',' << res.linear << '\n';
  }
}

}  // namespace

namespace {

bool given(const std::vector<std::string>& args, const std::string& key) {
  return std::ranges::any_of(args, [&](const std::string& a) {
    return a == key || a.rfind(key + "=", 0) == 0;
  });
}

// Replaces `--config FILE` with the file's entries as --key=value options placed right
// after the subcommand. Keys may sit at top level or under a section named after it.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  const auto sub = std::ranges::find_if(args.begin() + 1, args.end(),
                                        [](const std::string& a) { return a.rfind('-', 0) != 0; });
  if (sub == args.end()) throw CLI::ConfigError("--config needs a subcommand");
  std::vector<std::string> extra;
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == *sub)) continue;
    const std::string key = "--" + item.name;
    if (given(args, key)) continue;
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    extra.push_back(key + "=" + value);
  }
  args.insert(sub + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Long-run variance estimation, fixed-b inference and finite-chain oracles", "lrv"};
  app.require_subcommand(1);
  Common common;

  EstimateArgs est;
  auto* s_est = app.add_subcommand("estimate", "lag-window estimate of a series");
  s_est->add_option("--input", est.input, "series file (CSV column or whitespace); - for stdin");
  add_window_options(s_est, est.window, est.b, 1.0);
  s_est->add_option("--cn-rule", est.rule, "delta:<d> or fixedb")->capture_default_str();
  add_out(s_est, common);

  CiArgs ci;
  auto* s_ci = app.add_subcommand("ci", "confidence interval for the mean of a series");
  s_ci->add_option("--input", ci.input, "series file; - for stdin");
  s_ci->add_option("--method", ci.method)
      ->check(CLI::IsMember({"classical", "fixedb"}))
      ->capture_default_str();
  s_ci->add_option("--delta", ci.delta)->capture_default_str();
  add_window_options(s_ci, ci.window, ci.b, 0.5);
  s_ci->add_option("--alpha", ci.alpha)->capture_default_str();
  s_ci->add_option("--critical", ci.critical, "skip simulation and use this critical value");
  s_ci->add_option("--reps", ci.reps)->capture_default_str();
  s_ci->add_option("--grid", ci.grid)->capture_default_str();
  s_ci->add_option("--seed", ci.seed);
  add_out(s_ci, common);

  CritArgs crit;
  auto* s_crit = app.add_subcommand("critvals", "simulated fixed-b critical values");
  add_window_options(s_crit, crit.window, crit.b, 0.5);
  s_crit->add_option("--alpha", crit.alphas)->delimiter(',')->capture_default_str();
  s_crit->add_option("--reps", crit.reps)->capture_default_str();
  s_crit->add_option("--grid", crit.grid)->capture_default_str();
  s_crit->add_option("--seed", crit.seed)->required();
  s_crit->add_option("--max-reject-rate", crit.max_reject, "tolerated share of nonpositive K draws")
      ->capture_default_str();
  add_nonpositive_option(s_crit, crit.nonpositive);
  add_out(s_crit, common);

  Table1Args t1;
  auto* s_t1 = app.add_subcommand("table1", "reproduce the nine published 0.975-quantiles");
  s_t1->add_option("--reps", t1.reps)->capture_default_str();
  s_t1->add_option("--grid", t1.grid)->capture_default_str();
  s_t1->add_option("--seed", t1.seed)->required();
  s_t1->add_option("--max-reject-rate", t1.max_reject, "tolerated share of nonpositive K draws")
      ->capture_default_str();
  add_nonpositive_option(s_t1, t1.nonpositive);
  add_out(s_t1, common);

  CoverageArgs cov;
  CoverageArgs sim;
  auto model_options = [](CLI::App* sub, CoverageArgs& a) {
    sub->add_option("--model", a.model)
        ->check(CLI::IsMember({"garch", "poissonreg", "finite"}))
        ->capture_default_str();
    sub->add_option("--chain", a.chain, "transition matrix CSV (finite model)");
    sub->add_option("--f", a.f, "functional values per state")->delimiter(',');
    sub->add_option("--omega", a.omega)->capture_default_str();
    sub->add_option("--garch-alpha", a.g_alpha)->capture_default_str();
    sub->add_option("--garch-beta", a.g_beta)->capture_default_str();
    sub->add_option("--ne", a.ne)->capture_default_str();
    sub->add_option("--np", a.np)->capture_default_str();
    sub->add_option("--n-ep", a.n_ep)->capture_default_str();
    sub->add_option("--coordinate", a.coordinate, "traced RWM coordinate")->capture_default_str();
    sub->add_option("--n", a.n)->capture_default_str();
    sub->add_option("--burnin", a.burnin)->capture_default_str();
    sub->add_option("--seed", a.seed)->required();
  };
  auto* s_cov = app.add_subcommand("coverage", "coverage study of both interval families");
  model_options(s_cov, cov);
  s_cov->add_option("--reference", cov.reference, "posterior mean of the traced coordinate");
  s_cov->add_option("--reference-steps", cov.reference_steps);
  s_cov->add_option("--reps", cov.reps)->capture_default_str();
  s_cov->add_option("--deltas", cov.deltas)->delimiter(',')->capture_default_str();
  s_cov->add_option("--bs", cov.bs)->delimiter(',')->capture_default_str();
  add_window_options(s_cov, cov.window, cov.b_unused, 1.0);
  s_cov->add_option("--alpha", cov.alpha)->capture_default_str();
  s_cov->add_option("--crit-reps", cov.crit_reps)->capture_default_str();
  s_cov->add_option("--crit-grid", cov.crit_grid)->capture_default_str();
  add_out(s_cov, common);

  auto* s_sim = app.add_subcommand("simulate", "emit one simulated series");
  model_options(s_sim, sim);
  sim.burnin = 0;
  add_out(s_sim, common);

  ConsistencyArgs con;
  auto* s_con = app.add_subcommand("consistency", "estimator error against the exact variance");
  s_con->add_option("--chain", con.chain, "transition matrix CSV (default: two-state chain)");
  s_con->add_option("--f", con.f)->delimiter(',');
  s_con->add_option("--ns", con.ns)->delimiter(',')->capture_default_str();
  s_con->add_option("--deltas", con.deltas)->delimiter(',')->capture_default_str();
  s_con->add_option("--reps", con.reps)->capture_default_str();
  add_window_options(s_con, con.window, con.b_unused, 1.0);
  s_con->add_option("--seed", con.seed)->required();
  s_con->add_flag("--no-decomposition", con.no_decomposition);
  add_out(s_con, common);

  OracleArgs orc;
  auto* s_orc = app.add_subcommand("oracle", "exact identity checks on a finite chain");
  s_orc->add_option("--chain", orc.chain, "transition matrix CSV (default: two-state chain)");
  s_orc->add_option("--check", orc.check)
      ->check(CLI::IsMember({"poisson", "bivariate", "decomp", "lemma2"}))
      ->capture_default_str();
  s_orc->add_option("--f", orc.f)->delimiter(',');
  s_orc->add_option("--kernel", orc.kernel, "symmetric S x S kernel CSV");
  s_orc->add_option("--n", orc.n)->capture_default_str();
  s_orc->add_option("--paths", orc.paths)->capture_default_str();
  s_orc->add_option("--seed", orc.seed)->capture_default_str();
  add_window_options(s_orc, orc.window, orc.b, 1.0);
  s_orc->add_option("--delta", orc.delta)->capture_default_str();
  add_out(s_orc, common);

  UstatArgs us;
  auto* s_us = app.add_subcommand("ustat", "standardised U-statistics along simulated paths");
  s_us->add_option("--chain", us.chain);
  s_us->add_option("--kernel", us.kernel, "S x S kernel CSV (default f(x) + f(y))");
  s_us->add_option("--f", us.f)->delimiter(',');
  s_us->add_option("--n", us.n)->capture_default_str();
  s_us->add_option("--reps", us.reps)->capture_default_str();
  s_us->add_option("--seed", us.seed)->required();
  add_out(s_us, common);

  try {
    auto args = expand_config(std::vector<std::string>(argv, argv + argc));
    args.erase(args.begin());
    std::ranges::reverse(args);  // CLI11 consumes the vector from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*s_est) cmd_estimate(est, common, out);
    else if (*s_ci) cmd_ci(ci, common, out);
    else if (*s_crit) cmd_critvals(crit, common, out);
    else if (*s_t1) cmd_table1(t1, common, out);
    else if (*s_cov) cmd_coverage(cov, common, out);
    else if (*s_sim) cmd_simulate(sim, common, out);
    else if (*s_con) cmd_consistency(con, common, out);
    else if (*s_orc) cmd_oracle(orc, common, out);
    else if (*s_us) cmd_ustat(us, common, out);
  } catch (const std::exception& e) {
    err << "lrv: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"lrv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lrv::cli
