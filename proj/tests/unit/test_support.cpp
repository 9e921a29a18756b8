#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "lrv/experiments.hpp"
#include "lrv/io.hpp"
#include "lrv/parallel.hpp"
#include "lrv/rng.hpp"
#include "lrv/stats.hpp"

using namespace lrv;
using doctest::Approx;

TEST_SUITE("support") {

TEST_CASE("Philox4x32-10 known answers") {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(philox4x32_10(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      K{0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      K{0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniforms lie in (0,1) and normals look normal") {
  RngStream rng(1, 0);
  std::vector<double> u(20000), z(20000);
  for (auto& v : u) {
    v = rng.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  for (auto& v : z) v = rng.normal();
  CHECK(ks_test(u, [](double x) { return x; }).p_value > 0.01);
  CHECK(ks_test(z, normal_cdf).p_value > 0.01);
}

TEST_CASE("derived seeds separate tags") {
  CHECK(derive_seed(5, 1) != derive_seed(5, 2));
  CHECK(derive_seed(5, 1) != derive_seed(6, 1));
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));
}

TEST_CASE("order statistic quantile") {
  std::vector<double> v(200000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = double(i + 1);
  // ceil(0.975 * 200000) = 195000 exactly, despite the product rounding above it.
  CHECK(order_statistic_quantile(v, 0.975) == 195000.0);
  const std::vector<double> small{1.0, 2.0, 3.0, 4.0};
  CHECK(order_statistic_quantile(small, 0.5) == 2.0);
  CHECK(order_statistic_quantile(small, 0.51) == 3.0);
  CHECK(order_statistic_quantile(small, 1.0) == 4.0);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("Kolmogorov tail and two-sample KS") {
  CHECK(kolmogorov_survival(1.3581) == Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == Approx(0.01).epsilon(1e-3));
  const auto a = test::gaussian_series(3000, 2, 0);
  const auto b = test::gaussian_series(3000, 2, 1);
  CHECK(ks_test_two_sample(a, b).p_value > 0.01);
  auto shifted = b;
  for (auto& v : shifted) v += 0.3;
  CHECK(ks_test_two_sample(a, shifted).p_value < 1e-6);
}

TEST_CASE("bootstrap standard error of a quantile") {
  auto x = test::gaussian_series(20000, 3);
  std::sort(x.begin(), x.end());
  const double se = bootstrap_quantile_se(x, 0.975, 200, 4);
  // Asymptotic value sqrt(p(1-p)/n) / phi(z) is about 0.0247 here.
  CHECK(se > 0.015);
  CHECK(se < 0.035);
}

TEST_CASE("series reader") {
  std::istringstream csv("# provenance\nvalue\n1.5\n-2\n\n3e-1\n");
  CHECK(io::read_series(csv) == std::vector<double>{1.5, -2.0, 0.3});
  std::istringstream ws("1 2\t3,4\n5");
  CHECK(io::read_series(ws) == std::vector<double>{1, 2, 3, 4, 5});
  std::istringstream bad("1\nx\n");
  CHECK_THROWS(io::read_series(bad));
}

TEST_CASE("matrix reader") {
  std::istringstream in("0.9,0.1\n0.2, 0.8\n");
  const auto m = io::read_matrix_csv(in);
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 0.2);
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS(io::read_matrix_csv(ragged));
}

TEST_CASE("exceptions inside parallel loops surface on the caller") {
  ExceptionCollector errors;
#pragma omp parallel for
  for (int i = 0; i < 100; ++i) {
    errors.run([i] {
      if (i == 37) throw std::runtime_error("boom");
    });
  }
  CHECK_THROWS_WITH(errors.rethrow(), "boom");
}

TEST_CASE("published table values") {
  using experiments::published_quantile;
  CHECK(published_quantile(WindowKind::Bartlett, 0.3) == 2.828);
  CHECK(published_quantile(WindowKind::Bartlett, 0.9) == 4.735);
  CHECK(published_quantile(WindowKind::Quadratic, 0.9) == 12.575);
  CHECK(published_quantile(WindowKind::Truncated, 0.5) == 6.299);
  CHECK_THROWS(published_quantile(WindowKind::Parzen, 0.5));
}

TEST_CASE("coverage rows account for every replicate") {
  experiments::ExperimentConfig cfg;
  cfg.model = experiments::ModelKind::Finite;
  cfg.chain = experiments::two_state_chain();
  cfg.f = test::indicator_last();
  cfg.n = 500;
  cfg.burnin = 0;
  cfg.replications = 30;
  cfg.deltas = {0.5};
  cfg.bs = {0.3, 0.9};
  cfg.window = WindowKind::Quadratic;
  cfg.crit_replications = 2000;
  cfg.crit_grid = 200;
  cfg.seed = 7;
  const auto res = experiments::run_coverage(cfg);
  CHECK(res.truth == Approx(1.0 / 3.0));
  REQUIRE(res.rows.size() == 3);
  for (const auto& r : res.rows) {
    CHECK(r.covered + r.not_covered + r.failures == 30);
    CHECK(r.coverage >= 0.0);
    CHECK(r.coverage <= 1.0);
  }
  const auto again = experiments::run_coverage(cfg);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(again.rows[i].avg_length == res.rows[i].avg_length);
    CHECK(again.rows[i].covered == res.rows[i].covered);
  }
  std::ostringstream out;
  experiments::write_coverage_csv(out, cfg, res);
  const auto text = out.str();
  CHECK(text.rfind("# ", 0) == 0);
  CHECK(text.find("seed=7") != std::string::npos);

  cfg.replications = 1;
  for (const auto& r : experiments::run_coverage(cfg).rows) {
    if (r.failures == 0) CHECK((r.coverage == 0.0 || r.coverage == 1.0));
  }
}

TEST_CASE("experiment config validation") {
  experiments::ExperimentConfig cfg;
  cfg.replications = 0;
  CHECK_THROWS(cfg.validate());
  cfg.replications = 1;
  cfg.deltas.clear();
  cfg.bs.clear();
  CHECK_THROWS(cfg.validate());
  experiments::ExperimentConfig finite;
  finite.model = experiments::ModelKind::Finite;
  CHECK_THROWS(finite.validate());
}

TEST_CASE("GARCH series comes from u squared") {
  experiments::ExperimentConfig cfg;
  cfg.n = 100;
  cfg.burnin = 10;
  cfg.seed = 3;
  const auto x = experiments::simulate_series(cfg, 0);
  REQUIRE(x.size() == 100);
  for (double v : x) CHECK(v >= 0.0);
  CHECK(experiments::simulate_series(cfg, 0) == x);
  CHECK(experiments::simulate_series(cfg, 1) != x);
}

TEST_CASE("consistency trend on the two-state chain") {
  experiments::ConsistencyConfig cfg{experiments::two_state_chain(), test::indicator_last()};
  cfg.ns = {1000, 10000};
  cfg.replications = 40;
  cfg.seed = 11;
  const auto rows = experiments::run_consistency(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sigma2 == Approx(34.0 / 27.0));
  CHECK(rows[1].median_abs_error < rows[0].median_abs_error);

  // With c_n = n the estimator stays random and the error does not vanish.
  cfg.deltas = {1.0};
  cfg.decomposition = false;
  const auto fixed = experiments::run_consistency(cfg);
  CHECK(fixed[1].median_abs_error > 0.5 * fixed[0].median_abs_error);
  CHECK(fixed[1].median_abs_error > 0.2);
}

TEST_CASE("seed changes move critical values within bootstrap noise") {
  // One Bartlett cell at reduced size; the full grid runs in the acceptance binary.
  const double alphas[] = {0.05};
  const Window w(WindowKind::Bartlett, 0.5);
  const auto a = build_table(w, alphas, KbConfig{1000, 40000, 1}, true);
  const auto b = build_table(w, alphas, KbConfig{1000, 40000, 2}, true);
  const double se_a = bootstrap_quantile_se(a.sorted_samples, 0.975, 200, 3);
  const double se_b = bootstrap_quantile_se(b.sorted_samples, 0.975, 200, 4);
  CHECK(std::abs(a.critical_value(0.05) - b.critical_value(0.05)) <
        2.0 * std::hypot(se_a, se_b) + 1e-12);
}

}
