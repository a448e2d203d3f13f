#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"
#include "ticked_book.hpp"

namespace lob {

struct DailyObservation {
  std::string date;
  double spread;              // daily average spread over LOB events
  double variance_per_trade;  // realized variance over trade count
};

struct CalibrationResult {
  double k;        // fitted Pareto shape
  double x0;       // scale, fixed to the half spread mu + alpha/2
  double mu;       // intrinsic half-spread (phi_bar - alpha)/2
  double r;        // jump-event proportion derived from k
  double sse;      // sum of squared fit errors
  double phi_bar;  // period-average spread
  bool at_boundary = false;
};

// r from the fitted shape: the unique solution of the half-spread equation
// when both the evaluation point and the scale equal the half spread
// mu + alpha/2, i.e. r = (k-1)/k.
inline double derive_r(double k) {
  if (!(k > 1.0)) throw std::invalid_argument("derive_r: k must be > 1 (got " + std::to_string(k) + ")");
  return (k - 1.0) / k;
}

// Least-squares fit of the Pareto shape k on [2.001, 20] against daily
// variance-per-trade observations; the model value is
// sigma^2(k) = ((k-1)/(k-2)) (phi_bar/2)^2 with phi_bar the mean spread.
// Golden-section search (tolerance 1e-6 in k; the objective is unimodal
// since sigma^2(k) is monotone in k).
inline CalibrationResult fit_shape(const std::vector<DailyObservation>& observations,
                                   double alpha) {
  if (observations.empty()) throw std::invalid_argument("fit_shape: observations must be nonempty");
  if (!(alpha > 0.0)) throw std::invalid_argument("fit_shape: alpha must be > 0");
  for (const auto& obs : observations) {
    if (!(obs.spread > 0.0))
      throw std::invalid_argument("fit_shape: spread must be > 0 (date " + obs.date + ")");
    if (!(obs.variance_per_trade > 0.0))
      throw std::invalid_argument("fit_shape: variance_per_trade must be > 0 (date " + obs.date +
                                  ")");
  }
  double phi_bar = 0.0;
  for (const auto& obs : observations) phi_bar += obs.spread;
  phi_bar /= static_cast<double>(observations.size());
  if (!(phi_bar > alpha))
    throw std::invalid_argument("fit_shape: mean spread must exceed alpha (phi_bar = " +
                                std::to_string(phi_bar) + ", alpha = " + std::to_string(alpha) +
                                ")");

  const double half = 0.5 * phi_bar;
  const auto sse_at = [&](double k) {
    const double model = (k - 1.0) / (k - 2.0) * half * half;
    double sse = 0.0;
    for (const auto& obs : observations) {
      const double e = model - obs.variance_per_trade;
      sse += e * e;
    }
    return sse;
  };

  const double k_lo = 2.001, k_hi = 20.0, tol = 1e-6;
  double k = golden_section_min(sse_at, k_lo, k_hi, tol);
  bool boundary = false;
  if (k - k_lo <= 10.0 * tol && sse_at(k_lo) <= sse_at(k)) {
    k = k_lo;
    boundary = true;
  } else if (k_hi - k <= 10.0 * tol && sse_at(k_hi) <= sse_at(k)) {
    k = k_hi;
    boundary = true;
  }

  CalibrationResult result;
  result.k = k;
  result.phi_bar = phi_bar;
  result.mu = 0.5 * (phi_bar - alpha);
  result.x0 = result.mu + 0.5 * alpha;
  result.r = derive_r(k);
  result.sse = sse_at(k);
  result.at_boundary = boundary;
  return result;
}

// Average spread after a tick change: the intrinsic part phi_old - alpha_old
// carries over and the new tick is added back, phi_new = phi_old - alpha_old
// + alpha_new.
inline double forecast_spread(double phi_old, double alpha_old, double alpha_new) {
  if (!(alpha_old > 0.0))
    throw std::invalid_argument("forecast_spread: alpha_old must be > 0");
  if (!(phi_old > alpha_old))
    throw std::invalid_argument("forecast_spread: phi_old must exceed alpha_old (phi_old = " +
                                std::to_string(phi_old) + ", alpha_old = " +
                                std::to_string(alpha_old) + ")");
  if (!(alpha_new > 0.0))
    throw std::invalid_argument("forecast_spread: alpha_new must be > 0");
  return phi_old - alpha_old + alpha_new;
}

struct ForecastRow {
  std::string name;
  double spread_old = 0.0;
  double tick_old = 0.0;
  double tick_new = 0.0;
  double spread_actual = 0.0;  // <= 0 means "not observed"
  // outputs
  double forecast = 0.0;
  double rel_error = 0.0;    // |forecast - actual| / actual (when actual known)
  double naive_error = 0.0;  // |spread_old - actual| / actual (when actual known)
  bool has_actual = false;
  bool skipped = false;
  std::string skip_reason;
};

struct ForecastReport {
  std::vector<ForecastRow> rows;
  int n_valid = 0;
  int n_with_actual = 0;
  double mean_rel_error = 0.0;    // model predictor, across valid rows with actuals
  double naive_mean_rel_error = 0.0;  // constant-spread predictor on the same rows
};

// Per-row spread forecasts plus aggregate relative errors of the model and
// of the naive constant-spread predictor. Invalid rows are skipped and
// flagged rather than aborting the report.
inline ForecastReport forecast_report(const std::vector<ForecastRow>& input) {
  ForecastReport report;
  report.rows = input;
  double err_sum = 0.0, naive_sum = 0.0;
  for (auto& row : report.rows) {
    try {
      row.forecast = forecast_spread(row.spread_old, row.tick_old, row.tick_new);
      row.skipped = false;
    } catch (const std::exception& e) {
      row.skipped = true;
      row.skip_reason = e.what();
      continue;
    }
    ++report.n_valid;
    row.has_actual = row.spread_actual > 0.0;
    if (row.has_actual) {
      row.rel_error = std::fabs(row.forecast - row.spread_actual) / row.spread_actual;
      row.naive_error = std::fabs(row.spread_old - row.spread_actual) / row.spread_actual;
      err_sum += row.rel_error;
      naive_sum += row.naive_error;
      ++report.n_with_actual;
    }
  }
  if (report.n_with_actual > 0) {
    report.mean_rel_error = err_sum / report.n_with_actual;
    report.naive_mean_rel_error = naive_sum / report.n_with_actual;
  }
  return report;
}

}  // namespace lob
