#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "lob/calibration.hpp"
#include "lob/ticked_book.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace lob;

namespace {
std::vector<DailyObservation> make_obs(const std::vector<double>& spreads,
                                       const std::vector<double>& variances) {
  std::vector<DailyObservation> obs;
  for (std::size_t i = 0; i < spreads.size(); ++i)
    obs.push_back({"day" + std::to_string(i), spreads[i], variances[i]});
  return obs;
}
}  // namespace

TEST_CASE("derive_r") {
  SECTION("reference exponents round to the published percentages") {
    const std::vector<std::pair<double, int>> cases = {
        {2.866, 65}, {3.316, 70}, {3.478, 71}, {4.776, 79}, {9.910, 90}};
    for (const auto& [k, pct] : cases)
      CHECK(std::llround(100.0 * derive_r(k)) == pct);
  }
  SECTION("monotone increasing, bounded by one") {
    double prev = 0.0;
    for (double k = 1.1; k < 40.0; k += 0.7) {
      const double r = derive_r(k);
      CHECK(r > prev);
      CHECK(r < 1.0);
      prev = r;
    }
  }
  SECTION("rejects exponents at or below one") {
    REQUIRE_THROWS_AS(derive_r(1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(derive_r(0.5), std::invalid_argument);
  }
}

TEST_CASE("forecast_spread") {
  SECTION("worked rows") {
    CHECK(forecast_spread(0.019, 0.01, 0.02) == Approx(0.029).epsilon(1e-12));
    CHECK(forecast_spread(0.090, 0.05, 0.10) == Approx(0.140).epsilon(1e-12));
  }
  SECTION("identity under an unchanged tick") {
    CHECK(forecast_spread(0.0123, 0.01, 0.01) == Approx(0.0123).epsilon(1e-14));
  }
  SECTION("additive in the tick change") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.001, 0.05);
    for (int i = 0; i < 100; ++i) {
      const double a_old = u(rng);
      const double phi = a_old + u(rng);  // keeps phi_old > alpha_old
      const double a_new = u(rng);
      CHECK(forecast_spread(phi, a_old, a_new) - phi == Approx(a_new - a_old).margin(1e-15));
    }
  }
  SECTION("rejects degenerate inputs") {
    REQUIRE_THROWS_AS(forecast_spread(0.009, 0.01, 0.02), std::invalid_argument);
    REQUIRE_THROWS_AS(forecast_spread(0.01, 0.01, 0.02), std::invalid_argument);
    REQUIRE_THROWS_AS(forecast_spread(0.02, 0.0, 0.02), std::invalid_argument);
    REQUIRE_THROWS_AS(forecast_spread(0.02, 0.01, 0.0), std::invalid_argument);
  }
}

TEST_CASE("fit_shape recovers a noiseless exponent") {
  // variance held exactly at the k = 4 model value
  const double alpha = 0.005;
  const std::vector<double> spreads = {0.012, 0.012, 0.012, 0.012};
  const double target = 1.5 * 0.006 * 0.006;  // (k-1)/(k-2) at k=4 times (phi/2)^2
  const auto res = fit_shape(make_obs(spreads, {target, target, target, target}), alpha);
  CHECK(res.k == Approx(4.0).margin(1e-3));
  CHECK(res.phi_bar == Approx(0.012).epsilon(1e-14));
  CHECK(res.mu == Approx(0.0035).epsilon(1e-12));
  CHECK(res.x0 == Approx(0.006).epsilon(1e-12));
  CHECK(res.r == Approx(derive_r(res.k)).epsilon(1e-14));
  CHECK(res.sse < 1e-12);
  CHECK_FALSE(res.at_boundary);
}

TEST_CASE("fit_shape matches a dense-grid search on noisy data") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> noise(0.85, 1.15);
  const double alpha = 0.01;
  std::vector<double> spreads, variances;
  const double phi = 0.023;
  for (int i = 0; i < 15; ++i) {
    spreads.push_back(phi);
    variances.push_back(1.8 * (phi / 2) * (phi / 2) * noise(rng));
  }
  const auto res = fit_shape(make_obs(spreads, variances), alpha);
  const double k_dense = oracle::fit_k_dense(variances, phi);
  CHECK(res.k == Approx(k_dense).margin(2e-4));
  CHECK_FALSE(res.at_boundary);
  // round trip: the fitted model reproduces its own variance target
  const double model = variance_per_trade(res.mu, alpha, JumpLaw(res.k, res.x0));
  CHECK(model == Approx((res.k - 1.0) / (res.k - 2.0) * res.x0 * res.x0).epsilon(1e-12));
}

TEST_CASE("fit_shape flags a boundary solution") {
  // requested variance far above anything the model can reach inside the range
  const double alpha = 0.005;
  const double phi = 0.012;
  const double huge = 2000.0 * (phi / 2) * (phi / 2);
  const auto res = fit_shape(make_obs({phi, phi}, {huge, huge}), alpha);
  CHECK(res.at_boundary);
  CHECK(res.k == Approx(2.001).margin(5e-3));
}

TEST_CASE("fit_shape input validation") {
  REQUIRE_THROWS_AS(fit_shape({}, 0.01), std::invalid_argument);
  REQUIRE_THROWS_AS(fit_shape(make_obs({0.01}, {1e-5}), 0.0), std::invalid_argument);
  // phi_bar must exceed the tick
  REQUIRE_THROWS_AS(fit_shape(make_obs({0.008}, {1e-5}), 0.01), std::invalid_argument);
  // per-observation positivity, named by date
  REQUIRE_THROWS_WITH(fit_shape({{"2024-02-02", -0.01, 1e-5}}, 0.005),
                      Catch::Matchers::ContainsSubstring("2024-02-02"));
  REQUIRE_THROWS_WITH(fit_shape({{"2024-03-03", 0.012, 0.0}}, 0.005),
                      Catch::Matchers::ContainsSubstring("2024-03-03"));
}

TEST_CASE("forecast_report on the tick-change panel") {
  // pre-change spreads and ticks with realized post-change spreads
  std::vector<ForecastRow> rows = {
      {"Safran", 0.019, 0.01, 0.02, 0.031},
      {"Accor", 0.011, 0.005, 0.01, 0.016},
      {"Bouygues", 0.011, 0.005, 0.01, 0.017},
      {"Kering", 0.090, 0.05, 0.10, 0.141},
      {"Schneider Electric", 0.016, 0.01, 0.02, 0.025},
      {"Veolia Environnement", 0.007, 0.005, 0.01, 0.012},
      {"Vinci", 0.017, 0.01, 0.02, 0.026},
      {"Vivendi", 0.007, 0.005, 0.01, 0.012},
      {"Publicis", 0.019, 0.01, 0.02, 0.030},
      {"Legrand", 0.016, 0.01, 0.02, 0.029},
      {"Valeo", 0.018, 0.01, 0.02, 0.031},
      {"TechnipFMC", 0.010, 0.005, 0.01, 0.017},
  };
  const ForecastReport report = forecast_report(rows);
  REQUIRE(report.n_valid == 12);
  REQUIRE(report.n_with_actual == 12);

  SECTION("per-row forecasts round to the published values") {
    const std::vector<double> published = {0.029, 0.016, 0.016, 0.140, 0.026, 0.012,
                                           0.027, 0.012, 0.029, 0.026, 0.028, 0.015};
    for (std::size_t i = 0; i < published.size(); ++i)
      CHECK(std::llround(report.rows[i].forecast * 1000.0) ==
            std::llround(published[i] * 1000.0));
  }

  SECTION("aggregate errors") {
    CHECK(report.rows[0].rel_error == Approx(0.0645).margin(0.01));  // about 7%
    CHECK(report.mean_rel_error > 0.04);
    CHECK(report.mean_rel_error < 0.06);
    // the naive constant-spread baseline errs several times more
    CHECK(report.naive_mean_rel_error > 5.0 * report.mean_rel_error);
    // arithmetic spot check of one naive entry
    CHECK(report.rows[0].naive_error ==
          Approx(std::fabs(0.019 - 0.031) / 0.031).epsilon(1e-12));
  }
}

TEST_CASE("forecast_report skips invalid rows and keeps the rest") {
  std::vector<ForecastRow> rows = {
      {"good", 0.019, 0.01, 0.02, 0.031},
      {"bad", 0.005, 0.01, 0.02, 0.02},  // spread at or below the old tick
      {"unobserved", 0.02, 0.01, 0.02, 0.0},
  };
  const ForecastReport report = forecast_report(rows);
  CHECK(report.n_valid == 2);
  CHECK(report.n_with_actual == 1);
  CHECK_FALSE(report.rows[0].skipped);
  CHECK(report.rows[1].skipped);
  CHECK_FALSE(report.rows[1].skip_reason.empty());
  CHECK_FALSE(report.rows[2].skipped);
  CHECK_FALSE(report.rows[2].has_actual);
  CHECK(report.mean_rel_error == Approx(std::fabs(0.029 - 0.031) / 0.031).epsilon(1e-12));
}
