#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lrv/rng.hpp"
#include "lrv/stats.hpp"
#include "lrv/windows.hpp"

namespace lrv {

/// What to do with a draw whose K is not positive.
///   Reject    discard and redraw (the draw counts as a rejection)
///   Absolute  keep it as B(1)/sqrt(|K|)
///   Auto      Reject for windows whose estimator is nonnegative (Bartlett, Parzen), where
///             K <= 0 only appears through discretisation; Absolute for Quadratic and
///             Truncated, whose limit K_b is itself negative with positive probability.
enum class NonpositiveK { Auto, Reject, Absolute };

NonpositiveK resolve_policy(NonpositiveK policy, WindowKind kind) noexcept;
std::string_view to_string(NonpositiveK policy) noexcept;
/// Accepts "auto", "reject", "absolute" (case-insensitive).
NonpositiveK parse_nonpositive(std::string_view name);

struct KbConfig {
  std::size_t grid_steps = 2000;
  std::size_t replications = 200000;
  std::uint64_t master_seed = 20240917;
  // Fraction of rejected (nonpositive K) proposals tolerated before giving up.
  double max_reject_rate = 0.01;
  NonpositiveK nonpositive = NonpositiveK::Auto;
};

/// Raised when too many proposed draws had a nonpositive variance functional.
class RejectionRateExceeded : public std::runtime_error {
 public:
  RejectionRateExceeded(double rate, std::size_t rejected, std::size_t attempts);
  double rate() const noexcept { return rate_; }

 private:
  double rate_;
};

/// One accepted draw of B(1)/sqrt(|K|) together with the K value and the number of
/// nonpositive-K proposals discarded before it.
struct KbDraw {
  double statistic;
  double k_hat;
  std::size_t rejections;
};

/**
 * Euler discretisation of the fixed-b functional on an m-step grid:
 *
 *   K = 1 + D - 2 B(1) L + 2 B(1)^2 int_0^1 (1-t) w_b(t) dt
 *   D = 2 sum_{i} dB_i sum_{j<i} w_b((i-j)/m) dB_j
 *   L = sum_i g_b((i-1)/m) dB_i
 *
 * All stochastic integrals use left endpoints. g_b on the grid and the mean
 * weight are computed once.
 */
class EulerScheme {
 public:
  EulerScheme(const Window& w, std::size_t m);

  const Window& window() const noexcept { return window_; }
  std::size_t grid_steps() const noexcept { return m_; }

  /// K for the given increments (length m). `scratch` is resized as needed.
  double k_hat(std::span<const double> increments, std::vector<double>& scratch) const;
  double k_hat(std::span<const double> increments) const;

 private:
  Window window_;
  std::size_t m_;
  std::vector<double> g_grid_;
  double mean_weight_;
};

/// Draws until K is acceptable under `policy` (Auto counts as Reject here); gives up after
/// `max_attempts` proposals. K = 0 is always redrawn.
KbDraw simulate_kb_euler(const EulerScheme& scheme, RngStream& rng,
                         NonpositiveK policy = NonpositiveK::Reject,
                         std::size_t max_attempts = 10000);

/// Pre-limit analogue: z iid N(0,1) of length m, statistic (sum z / sqrt m) / sqrt(Gamma^2(z))
/// with the lag-window estimator at c_n = m.
KbDraw simulate_kb_discrete(const Window& w, std::size_t m, RngStream& rng,
                            NonpositiveK policy = NonpositiveK::Reject,
                            std::size_t max_attempts = 10000);

struct KbSamples {
  std::vector<double> statistics;  // in replicate order
  std::size_t rejections = 0;
  std::size_t negative_kept = 0;  // draws kept with K < 0 under the Absolute policy
  double reject_rate() const noexcept;
  /// Share of all proposals with K <= 0, whichever way they were handled.
  double nonpositive_rate() const noexcept;
};

enum class KbScheme { Euler, Discrete };

/// Replicate i uses RngStream(master_seed, i); the result does not depend on thread count.
/// Throws RejectionRateExceeded when the rejection rate tops cfg.max_reject_rate.
KbSamples simulate_kb_samples(const Window& w, const KbConfig& cfg,
                              KbScheme scheme = KbScheme::Euler);

/// Single-threaded reference for simulate_kb_samples.
KbSamples simulate_kb_samples_serial(const Window& w, const KbConfig& cfg,
                                     KbScheme scheme = KbScheme::Euler);

struct CriticalValueTable {
  Window window;
  std::map<double, double> quantiles;  // alpha -> (1 - alpha/2)-quantile
  std::size_t replications;
  std::size_t grid_steps;
  std::uint64_t master_seed;
  double reject_rate;
  double nonpositive_rate;
  std::vector<double> sorted_samples;  // empty unless kept

  /// Looks up alpha; throws std::out_of_range if the table has no such level.
  double critical_value(double alpha) const;
};

CriticalValueTable build_table(const Window& w, std::span<const double> alphas,
                               const KbConfig& cfg, bool keep_samples = false);

/// Empirical (1 - alpha/2)-quantile of B(1)/sqrt(K_b): upper order statistic of R draws.
double critical_value(const Window& w, double alpha, const KbConfig& cfg);

}  // namespace lrv
