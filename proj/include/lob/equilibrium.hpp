#pragma once

#include <cmath>
#include <stdexcept>

#include "distributions.hpp"
#include "numerics.hpp"

namespace lob {

struct MarketParams {
  double r;  // proportion of events that are price jumps, in (0,1)
  JumpLaw jump;
  VolumeLaw volume;

  MarketParams(double r_, const JumpLaw& j, const VolumeLaw& v) : r(r_), jump(j), volume(v) {
    if (!(r > 0.0 && r < 1.0))
      throw std::invalid_argument("market.r must lie in (0,1) (got " + std::to_string(r) + ")");
  }
};

// Half-spread equation target: E[max(B/mu, 1)] = (1+r)/(2r).
inline double half_spread_target(double r) { return (1.0 + r) / (2.0 * r); }

// Closed-form intrinsic half-spread for the symmetric Pareto jump law.
inline double half_spread_closed_form(const MarketParams& params) {
  const double k = params.jump.k, x0 = params.jump.x0, r = params.r;
  if (r <= (k - 1.0) / k) return r * k * x0 / (k - 1.0);
  return x0 * std::pow(r / ((1.0 - r) * (k - 1.0)), 1.0 / k);
}

// Unique mu > 0 with E[max(B/mu,1)] = (1+r)/(2r), by bisection on the
// strictly decreasing expected ratio. Brackets [x0*1e-6, x0*1e6]; relative
// tolerance 1e-12 in the argument.
inline double solve_half_spread(const MarketParams& params) {
  const double target = half_spread_target(params.r);
  const double lo = params.jump.x0 * 1e-6;
  const double hi = params.jump.x0 * 1e6;
  return bisect([&](double x) { return target - expected_max_ratio(params.jump, x); }, lo, hi,
                0.0, 1e-12);
}

// Zero-tick equilibrium: the intrinsic half-spread plus the continuous
// cumulative shape L and its inverse.
struct EquilibriumBook {
  MarketParams params;
  double mu;
};

inline EquilibriumBook solve_equilibrium(const MarketParams& params) {
  return EquilibriumBook{params, solve_half_spread(params)};
}

// Cumulative LOB shape L(x): zero on [-mu, mu], odd, strictly increasing
// beyond the spread edges.
inline double cumulative_shape(const EquilibriumBook& book, double x) {
  const double ax = std::fabs(x);
  if (ax <= book.mu) return 0.0;
  const double r = book.params.r;
  const double arg =
      1.0 / (1.0 - r) - (r / (1.0 - r)) * expected_max_ratio(book.params.jump, ax);
  const double mag = volume_quantile(book.params.volume, arg);
  return x > 0.0 ? mag : -mag;
}

// argmin{x : L(x) >= q}. For q > 0 the unique x > mu with L(x) = q; for
// q = 0 the lower spread edge -mu; odd in q.
inline double shape_inverse(const EquilibriumBook& book, double q) {
  if (q == 0.0) return -book.mu;
  if (q < 0.0) return -shape_inverse(book, -q);
  const double r = book.params.r;
  const double c = (1.0 - (1.0 - r) * volume_cdf(book.params.volume, q)) / r;
  double lo = book.mu;
  double hi = 2.0 * book.mu;
  while (expected_max_ratio(book.params.jump, hi) > c) hi *= 2.0;
  return bisect([&](double x) { return c - expected_max_ratio(book.params.jump, x); }, lo, hi,
                0.0, 1e-13);
}

// Expected profit of the marginal (bottom-of-queue) infinitesimal order at
// price offset x given the cumulative depth in front of it. Depth is passed
// explicitly so off-equilibrium configurations can be evaluated; at the
// equilibrium depth the gain vanishes for |x| > mu.
inline double marginal_gain(const MarketParams& params, double x, double depth) {
  const double r = params.r;
  if (x >= 0.0) {
    const double denom = r * (1.0 - jump_cdf(params.jump, x)) +
                         (1.0 - r) * (1.0 - volume_cdf(params.volume, depth));
    return x - r * jump_upper_mean(params.jump, x) / denom;
  }
  const double denom =
      r * jump_cdf(params.jump, x) + (1.0 - r) * volume_cdf(params.volume, depth);
  return -x - r * jump_upper_mean(params.jump, -x) / denom;
}

// Variance per trade in the vanishing-tick regime:
// E[B^2] * mu / E[|B| 1_{|B|>mu}]; equals ((k-1)/(k-2)) mu^2 when x0 = mu.
inline double variance_per_trade_zero_tick(const EquilibriumBook& book) {
  return jump_second_moment(book.params.jump) * book.mu /
         jump_abs_upper_mean(book.params.jump, book.mu);
}

}  // namespace lob
