#pragma once

// Independent numerical recomputations used to pin test expectations.
// Everything here works from the defining integrals and equations with its
// own quadrature and bisection loops; nothing reuses the library's closed
// forms or solvers.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

// composite Simpson with panel doubling until two refinements agree
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  auto simpson = [&](int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
  };
  double prev = simpson(64);
  for (int n = 128; n <= (1 << 22); n *= 2) {
    const double cur = simpson(n);
    if (std::fabs(cur - prev) <= tol * (1.0 + std::fabs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

// ---- symmetric Pareto jump law: |B| has density k x0^k y^-(k+1) on [x0, inf)

// E[|B|^p 1_{|B| > x}] by quadrature after the substitution y = L e^s
inline double pareto_tail_moment(double k, double x0, double x, double p) {
  const double L = x > x0 ? x : x0;
  const double span = 80.0 / (k - p);  // integrand decays like e^-(k-p)s
  const double scale = k * std::pow(x0, k) * std::pow(L, p - k);
  return scale * integrate([&](double s) { return std::exp((p - k) * s); }, 0.0, span);
}

inline double abs_survival(double k, double x0, double x) {
  if (x <= x0) return 1.0;
  return pareto_tail_moment(k, x0, x, 0.0);
}

inline double jump_cdf(double k, double x0, double x) {
  const double s = abs_survival(k, x0, std::fabs(x));
  return x >= 0.0 ? 1.0 - 0.5 * s : 0.5 * s;
}

// E[B 1_{B > x}] for x >= 0; by symmetry half the absolute tail mean
inline double jump_upper_mean(double k, double x0, double x) {
  return 0.5 * pareto_tail_moment(k, x0, x, 1.0);
}

inline double jump_second_moment(double k, double x0) {
  return pareto_tail_moment(k, x0, 0.0, 2.0);
}

inline double expected_max_ratio(double k, double x0, double x) {
  // E[max(B/x, 1)] for the signed jump: only upward jumps beyond x contribute,
  // and they carry half of the |B| tail by symmetry
  return (1.0 - 0.5 * abs_survival(k, x0, x)) + 0.5 * pareto_tail_moment(k, x0, x, 1.0) / x;
}

// ---- centered normal volume law

inline double normal_cdf(double sigma, double x) {
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

inline double normal_quantile(double sigma, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("oracle quantile needs p in (0,1)");
  double lo = -64.0 * sigma, hi = 64.0 * sigma;
  for (int i = 0; i < 400 && hi - lo > 1e-15 * sigma; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(sigma, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- equilibrium quantities, built only from the quadrature pieces above

inline double half_spread(double r, double k, double x0) {
  const double target = (1.0 + r) / (2.0 * r);
  double lo = std::log(x0 * 1e-8), hi = std::log(x0 * 1e8);
  for (int i = 0; i < 300 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    // E[max(|B|/x, 1)] decreases in x
    (expected_max_ratio(k, x0, std::exp(mid)) > target ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

inline double cumulative_shape(double r, double k, double x0, double sigma, double x) {
  const double mu = half_spread(r, k, x0);
  const double ax = std::fabs(x);
  if (ax <= mu) return 0.0;
  const double arg = 1.0 / (1.0 - r) - r / (1.0 - r) * expected_max_ratio(k, x0, ax);
  const double mag = normal_quantile(sigma, arg);
  return x > 0.0 ? mag : -mag;
}

inline double queue_value(double r, double k, double x0, double sigma, double h,
                          double prev_depth) {
  const double denom =
      1.0 - r * jump_cdf(k, x0, h) - (1.0 - r) * normal_cdf(sigma, prev_depth);
  return h - r * jump_upper_mean(k, x0, h) / denom;
}

// ---- tick-grid arithmetic, recomputed inline

inline double conditional_spread(double mu, double alpha, double d) {
  double inner = std::ceil((mu - d) / alpha);
  if (inner < 0.0) inner = 0.0;
  const double k_r = 1.0 + inner;
  double k_l = std::ceil((mu + d) / alpha);
  if (k_l < 1.0) k_l = 1.0;
  return alpha * (k_r + k_l - 1.0);
}

inline double average_spread_riemann(double mu, double alpha, int n = 100000) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += conditional_spread(mu, alpha, (i + 0.5) * alpha / n);
  return sum / n;
}

// probability that a jump clears the first limit on its side, offset d given
inline double jump_trade_trigger(double mu, double alpha, double d, double k, double x0) {
  double inner = std::ceil((mu - d) / alpha);
  if (inner < 0.0) inner = 0.0;
  const double k_r = 1.0 + inner;
  double k_l = std::ceil((mu + d) / alpha);
  if (k_l < 1.0) k_l = 1.0;
  auto surv = [&](double x) { return x <= x0 ? 1.0 : std::pow(x0 / x, k); };
  return 0.5 * (surv(d + (k_r - 1.0) * alpha) + surv(k_l * alpha - d));
}

inline double mean_trigger(double mu, double alpha, double k, double x0, int n = 100000) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += jump_trade_trigger(mu, alpha, (i + 0.5) * alpha / n, k, x0);
  return sum / n;
}

// long-run variance per trade of the ticked simulation: between consecutive
// trades the efficient price accumulates a geometric number of jumps, each of
// which trades with the offset-averaged probability q
inline double renewal_variance(double r, double k, double x0, double mu, double alpha) {
  const double second = k * x0 * x0 / (k - 2.0);
  const double q = alpha > 0.0 ? mean_trigger(mu, alpha, k, x0) : 1.0;
  return r * second / (r * q + 1.0 - r);
}

inline double informed_share(double r, double k, double x0, double mu, double alpha) {
  const double q = alpha > 0.0 ? mean_trigger(mu, alpha, k, x0)
                               : (mu <= x0 ? 1.0 : std::pow(x0 / mu, k));
  return r * q / (r * q + 1.0 - r);
}

// dense-grid minimizer of the calibration objective
inline double fit_k_dense(const std::vector<double>& variances, double phi_bar,
                          double step = 1e-4) {
  const double half = phi_bar / 2.0;
  double best_k = 2.001, best_sse = 1e300;
  for (double k = 2.001; k <= 20.0 + 1e-12; k += step) {
    const double model = (k - 1.0) / (k - 2.0) * half * half;
    double sse = 0.0;
    for (const double v : variances) sse += (model - v) * (model - v);
    if (sse < best_sse) {
      best_sse = sse;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace oracle
