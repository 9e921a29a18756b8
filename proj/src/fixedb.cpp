#include "lrv/fixedb.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "lrv/convolution.hpp"
#include "lrv/lagwindow.hpp"
#include "lrv/parallel.hpp"

namespace lrv {

namespace {

void check_config(const KbConfig& cfg) {
  if (cfg.grid_steps < 2) throw std::invalid_argument("grid_steps must be at least 2");
  if (cfg.replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (!(cfg.max_reject_rate >= 0.0 && cfg.max_reject_rate <= 1.0)) {
    throw std::invalid_argument("max_reject_rate must lie in [0, 1]");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
}

KbDraw draw(const Window& w, const EulerScheme* scheme, std::size_t m, NonpositiveK policy,
            RngStream& rng) {
  return scheme ? simulate_kb_euler(*scheme, rng, policy)
                : simulate_kb_discrete(w, m, rng, policy);
}

// Returns true when k is usable under the policy.
bool accept(double k, NonpositiveK policy) {
  return policy == NonpositiveK::Absolute ? k != 0.0 : k > 0.0;
}

}  // namespace

NonpositiveK resolve_policy(NonpositiveK policy, WindowKind kind) noexcept {
  if (policy != NonpositiveK::Auto) return policy;
  return kind == WindowKind::Bartlett || kind == WindowKind::Parzen ? NonpositiveK::Reject
                                                                    : NonpositiveK::Absolute;
}

std::string_view to_string(NonpositiveK policy) noexcept {
  switch (policy) {
    case NonpositiveK::Reject: return "reject";
    case NonpositiveK::Absolute: return "absolute";
    default: return "auto";
  }
}

NonpositiveK parse_nonpositive(std::string_view name) {
  std::string lower(name);
  std::ranges::transform(lower, lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "auto") return NonpositiveK::Auto;
  if (lower == "reject") return NonpositiveK::Reject;
  if (lower == "absolute") return NonpositiveK::Absolute;
  throw std::invalid_argument("unknown nonpositive-K policy: " + std::string(name));
}

RejectionRateExceeded::RejectionRateExceeded(double rate, std::size_t rejected,
                                             std::size_t attempts)
    : std::runtime_error("nonpositive K rejection rate " + std::to_string(rate) + " (" +
                         std::to_string(rejected) + " of " + std::to_string(attempts) +
                         ") exceeds the allowed rate"),
      rate_(rate) {}

EulerScheme::EulerScheme(const Window& w, std::size_t m)
    : window_(w), m_(m), g_grid_(m), mean_weight_(mean_weight(w)) {
  if (m < 2) throw std::invalid_argument("Euler grid needs m >= 2");
  const double dm = static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) g_grid_[i] = g_b(w, static_cast<double>(i) / dm);
}

double EulerScheme::k_hat(std::span<const double> dB, std::vector<double>& scratch) const {
  if (dB.size() != m_) throw std::invalid_argument("increment count must equal grid_steps");
  scratch.resize(m_);
  causal_window_convolution(dB, window_, static_cast<double>(m_), scratch);
  double b1 = 0.0, d = 0.0, l = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    b1 += dB[i];
    d += dB[i] * scratch[i];
    l += g_grid_[i] * dB[i];
  }
  return 1.0 + 2.0 * d - 2.0 * b1 * l + 2.0 * b1 * b1 * mean_weight_;
}

double EulerScheme::k_hat(std::span<const double> dB) const {
  std::vector<double> scratch;
  return k_hat(dB, scratch);
}

KbDraw simulate_kb_euler(const EulerScheme& scheme, RngStream& rng, NonpositiveK policy,
                         std::size_t max_attempts) {
  const std::size_t m = scheme.grid_steps();
  const double sd = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> dB(m);
  std::vector<double> scratch(m);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    double b1 = 0.0;
    for (auto& v : dB) {
      v = sd * rng.normal();
      b1 += v;
    }
    const double k = scheme.k_hat(dB, scratch);
    if (accept(k, policy)) return {b1 / std::sqrt(std::abs(k)), k, attempt};
  }
  throw RejectionRateExceeded(1.0, max_attempts, max_attempts);
}

KbDraw simulate_kb_discrete(const Window& w, std::size_t m, RngStream& rng,
                            NonpositiveK policy, std::size_t max_attempts) {
  if (m < 2) throw std::invalid_argument("discrete analogue needs m >= 2");
  const double cm = static_cast<double>(m);
  const std::size_t last = last_active_lag(w, cm, m);
  std::vector<double> z(m);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    double sum = 0.0;
    for (auto& v : z) {
      v = rng.normal();
      sum += v;
    }
    const double mean = sum / cm;
    for (auto& v : z) v -= mean;
    const auto gamma = kernels::autocovariances_fft(z, last);
    const double gsq = lag_window_from_autocovariances(gamma, m, w, cm).gamma_sq;
    if (accept(gsq, policy)) return {sum / std::sqrt(cm) / std::sqrt(std::abs(gsq)), gsq, attempt};
  }
  throw RejectionRateExceeded(1.0, max_attempts, max_attempts);
}

double KbSamples::reject_rate() const noexcept {
  const double attempts = static_cast<double>(statistics.size() + rejections);
  return attempts > 0.0 ? static_cast<double>(rejections) / attempts : 0.0;
}

double KbSamples::nonpositive_rate() const noexcept {
  const double attempts = static_cast<double>(statistics.size() + rejections);
  return attempts > 0.0 ? static_cast<double>(rejections + negative_kept) / attempts : 0.0;
}

namespace {

KbSamples finish(std::vector<double> stats, const std::vector<std::size_t>& rejected,
                 const std::vector<char>& negative, double max_rate) {
  KbSamples out;
  out.statistics = std::move(stats);
  for (auto r : rejected) out.rejections += r;
  for (auto neg : negative) out.negative_kept += neg ? 1 : 0;
  if (out.reject_rate() > max_rate) {
    throw RejectionRateExceeded(out.reject_rate(), out.rejections,
                                out.rejections + out.statistics.size());
  }
  return out;
}

}  // namespace

KbSamples simulate_kb_samples(const Window& w, const KbConfig& cfg, KbScheme scheme) {
  check_config(cfg);
  const std::size_t reps = cfg.replications;
  std::vector<double> stats(reps);
  std::vector<std::size_t> rejected(reps);
  std::vector<char> negative(reps);
  const NonpositiveK policy = resolve_policy(cfg.nonpositive, w.kind());
  const std::optional<EulerScheme> euler =
      scheme == KbScheme::Euler ? std::optional<EulerScheme>(std::in_place, w, cfg.grid_steps)
                                : std::nullopt;
  const EulerScheme* ep = euler ? &*euler : nullptr;

  const auto count = static_cast<std::ptrdiff_t>(reps);
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    errors.run([&] {
      RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(i));
      const KbDraw d = draw(w, ep, cfg.grid_steps, policy, rng);
      stats[static_cast<std::size_t>(i)] = d.statistic;
      rejected[static_cast<std::size_t>(i)] = d.rejections;
      negative[static_cast<std::size_t>(i)] = d.k_hat < 0.0;
    });
  }
  errors.rethrow();
  return finish(std::move(stats), rejected, negative, cfg.max_reject_rate);
}

KbSamples simulate_kb_samples_serial(const Window& w, const KbConfig& cfg, KbScheme scheme) {
  check_config(cfg);
  std::vector<double> stats(cfg.replications);
  std::vector<std::size_t> rejected(cfg.replications);
  std::vector<char> negative(cfg.replications);
  const NonpositiveK policy = resolve_policy(cfg.nonpositive, w.kind());
  const std::optional<EulerScheme> euler =
      scheme == KbScheme::Euler ? std::optional<EulerScheme>(std::in_place, w, cfg.grid_steps)
                                : std::nullopt;
  const EulerScheme* ep = euler ? &*euler : nullptr;
  for (std::size_t i = 0; i < cfg.replications; ++i) {
    RngStream rng(cfg.master_seed, i);
    const KbDraw d = draw(w, ep, cfg.grid_steps, policy, rng);
    stats[i] = d.statistic;
    rejected[i] = d.rejections;
    negative[i] = d.k_hat < 0.0;
  }
  return finish(std::move(stats), rejected, negative, cfg.max_reject_rate);
}

double CriticalValueTable::critical_value(double alpha) const {
  const auto it = quantiles.find(alpha);
  if (it == quantiles.end()) {
    throw std::out_of_range("critical value table has no entry for alpha " + std::to_string(alpha));
  }
  return it->second;
}

CriticalValueTable build_table(const Window& w, std::span<const double> alphas,
                               const KbConfig& cfg, bool keep_samples) {
  for (double a : alphas) check_alpha(a);
  KbSamples samples = simulate_kb_samples(w, cfg);
  std::sort(samples.statistics.begin(), samples.statistics.end());
  CriticalValueTable table{w, {}, cfg.replications, cfg.grid_steps, cfg.master_seed,
                           samples.reject_rate(), samples.nonpositive_rate(), {}};
  for (double a : alphas) {
    table.quantiles[a] = order_statistic_quantile(samples.statistics, 1.0 - a / 2.0);
  }
  if (keep_samples) table.sorted_samples = std::move(samples.statistics);
  return table;
}

double critical_value(const Window& w, double alpha, const KbConfig& cfg) {
  check_alpha(alpha);
  const double alphas[] = {alpha};
  return build_table(w, alphas, cfg).critical_value(alpha);
}

}  // namespace lrv
