#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lrv/chain_oracle.hpp"
#include "lrv/ci.hpp"
#include "lrv/fixedb.hpp"
#include "lrv/samplers.hpp"
#include "lrv/windows.hpp"

namespace lrv::experiments {

enum class ModelKind { Garch, PoissonReg, Finite };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

struct ExperimentConfig {
  ModelKind model = ModelKind::Garch;

  sampling::GarchParams garch;

  // Finite chain model: path of f(X_l), started from pi.
  std::optional<oracle::FiniteChain> chain;
  oracle::Vector f;

  // Poisson regression model: the traced coordinate of the RWM chain (1 is alpha_1).
  int ne = 3;
  int np = 20;
  double n_ep = 1000.0;
  sampling::PoissonTruth truth;
  std::size_t coordinate = 1;
  std::optional<double> reference;   // posterior mean of the coordinate; estimated if absent
  std::size_t reference_steps = 0;   // 0 means 10 * (burnin + n)

  std::size_t n = 20000;
  std::size_t burnin = 4000;
  std::size_t replications = 200;
  std::vector<double> deltas{0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> bs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  WindowKind window = WindowKind::Bartlett;
  double alpha = 0.05;
  std::uint64_t seed = 1;

  // Fixed-b critical values used by run_coverage.
  std::size_t crit_replications = 50000;
  std::size_t crit_grid = 2000;

  void validate() const;
};

struct CoverageRow {
  CiMethod method;
  double param;
  WindowKind window;
  std::size_t n;
  std::size_t replications;
  std::size_t covered;
  std::size_t not_covered;
  std::size_t failures;  // nonpositive variance estimates
  double coverage;       // covered / (covered + not_covered); 0 when every replicate failed
  double avg_length;
  double avg_sigma;
  double critical;
};

struct CoverageResult {
  double truth;
  std::vector<CoverageRow> rows;
};

/// Deterministic given cfg.seed: replicate i draws from RngStream(derived seed, i).
CoverageResult run_coverage(const ExperimentConfig& cfg);

/// One replicate's observed series under the configured model (used by run_coverage).
std::vector<double> simulate_series(const ExperimentConfig& cfg, std::size_t replicate);

struct Table1Row {
  WindowKind window;
  double b;
  double quantile;
  double published;
  double abs_diff;
  double bootstrap_se;
  double reject_rate;  // share of draws with K <= 0 (redrawn or kept, per policy)
};

/// Published 0.975-quantiles, keyed by window kind and b in {0.3, 0.5, 0.9}.
double published_quantile(WindowKind kind, double b);

std::vector<Table1Row> run_table1(const KbConfig& cfg);

struct ConsistencyConfig {
  oracle::FiniteChain chain;
  oracle::Vector f;
  std::vector<std::size_t> ns{1000, 10000, 100000};
  std::vector<double> deltas{0.6};
  std::size_t replications = 100;
  WindowKind window = WindowKind::Bartlett;
  std::uint64_t seed = 1;
  bool decomposition = true;
};

struct ConsistencyRow {
  std::size_t n;
  double delta;
  double c_n;
  std::size_t replications;
  double sigma2;
  double median_abs_error;
  double median_abs_quad;  // martingale double sum
  double median_abs_rn;
  double median_abs_zeta;
};

std::vector<ConsistencyRow> run_consistency(const ConsistencyConfig& cfg);

/// The two-state chain used throughout: P = [[0.9, 0.1], [0.2, 0.8]], started from pi.
oracle::FiniteChain two_state_chain();

// CSV writers. Each starts with a '#' provenance line.
void write_coverage_csv(std::ostream& out, const ExperimentConfig& cfg, const CoverageResult& r);
void write_table1_csv(std::ostream& out, const KbConfig& cfg, const std::vector<Table1Row>& rows);
void write_consistency_csv(std::ostream& out, const ConsistencyConfig& cfg,
                           const std::vector<ConsistencyRow>& rows);

}  // namespace lrv::experiments
