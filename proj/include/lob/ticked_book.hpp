#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "equilibrium.hpp"

namespace lob {

// Price grid seen from the efficient price: tick size alpha and offset
// d = (next admissible level above the efficient price) - (efficient price),
// d in [0, alpha).
struct TickGrid {
  double alpha;
  double d;

  TickGrid(double tick, double offset) : alpha(tick), d(offset) {
    if (!(alpha > 0.0))
      throw std::invalid_argument("grid.alpha (tick) must be > 0 (got " + std::to_string(alpha) +
                                  ")");
    if (!(d >= 0.0 && d < alpha))
      throw std::invalid_argument("grid.d (offset) must lie in [0, alpha) (got " +
                                  std::to_string(d) + ")");
  }
};

// Indices of the first non-empty ask (k_r) and bid (k_l) limits.
// k_r = 1 + ceil((mu-d)/alpha) with the inner term clamped below at 0;
// k_l = ceil((mu+d)/alpha).
inline std::pair<int, int> first_limits(double mu, const TickGrid& grid) {
  if (!(mu > 0.0)) throw std::invalid_argument("first_limits: mu must be > 0");
  long long inner = static_cast<long long>(std::ceil((mu - grid.d) / grid.alpha));
  if (inner < 0) inner = 0;
  long long kl = static_cast<long long>(std::ceil((mu + grid.d) / grid.alpha));
  if (kl < 1) kl = 1;
  return {static_cast<int>(1 + inner), static_cast<int>(kl)};
}

// Discrete-tick book: grid, underlying continuous equilibrium, first limits,
// and the truncation depth for materialized arrays. Depths are recomputed on
// demand, never cached across offset changes.
struct DiscreteBook {
  TickGrid grid;
  EquilibriumBook equilibrium;
  int k_r;
  int k_l;
  int n_levels;
};

inline DiscreteBook make_discrete_book(const TickGrid& grid, const EquilibriumBook& eq,
                                       int n_levels = 50) {
  if (n_levels < 1) throw std::invalid_argument("n_levels must be >= 1");
  auto [kr, kl] = first_limits(eq.mu, grid);
  return DiscreteBook{grid, eq, kr, kl, n_levels};
}

// Signed price offset of level i from the efficient price: ask level i >= 1
// sits at d + (i-1) alpha, bid level i <= -1 at d + i alpha.
inline double level_offset(const DiscreteBook& book, int i) {
  if (i == 0) throw std::invalid_argument("level index must be nonzero");
  return i > 0 ? book.grid.d + (i - 1) * book.grid.alpha : book.grid.d + i * book.grid.alpha;
}

// Cumulative depth L^d(i): positive on the ask side, negative on the bid
// side, zero strictly inside the spread.
inline double cumulative_depth(const DiscreteBook& book, int i) {
  return cumulative_shape(book.equilibrium, level_offset(book, i));
}

// Per-level volume l^d(i): >= 0 on the ask side, <= 0 on the bid side.
inline double level_volume(const DiscreteBook& book, int i) {
  if (i == 0) throw std::invalid_argument("level index must be nonzero");
  if (i > 0) return cumulative_depth(book, i) - (i == 1 ? 0.0 : cumulative_depth(book, i - 1));
  return cumulative_depth(book, i) - (i == -1 ? 0.0 : cumulative_depth(book, i + 1));
}

// Spread conditional on the offset: alpha * (k_r + k_l - 1).
inline double conditional_spread(double mu, const TickGrid& grid) {
  auto [kr, kl] = first_limits(mu, grid);
  return grid.alpha * (kr + kl - 1);
}

// Spread averaged over d uniform on [0, alpha): 2 mu + alpha.
inline double average_spread(double mu, double alpha) { return 2.0 * mu + alpha; }

// Expected profit of the marginal order at level i given the materialized
// equilibrium depths; zero (to rounding) at populated levels, negative
// inside the spread.
inline double level_gain(const DiscreteBook& book, int i) {
  const double h = level_offset(book, i);
  return marginal_gain(book.equilibrium.params, h, cumulative_depth(book, i));
}

// Top-of-queue expected profit at price offset h when the cumulative depth
// quoted strictly closer to the efficient price is prev_depth (both taken on
// the ask side by symmetry). Shared by queue_position_value and the
// simulator's bid-side accounting.
inline double queue_value_at(const MarketParams& params, double h, double prev_depth) {
  const double r = params.r;
  const double denom = 1.0 - r * jump_cdf(params.jump, h) -
                       (1.0 - r) * volume_cdf(params.volume, prev_depth);
  return h - r * jump_upper_mean(params.jump, h) / denom;
}

// Queue position value G~^d(i) for ask level i >= 1: the expected profit of
// the order at the top of the level's FIFO queue (the bottom's is zero at
// populated levels). Extended below k_r with the in-spread depths
// materialized as 0; bid-side values are obtained by reflecting the offset
// (d -> alpha-d when d > 0, d -> 0 when d = 0).
inline double queue_position_value(const DiscreteBook& book, int i) {
  if (i <= 0)
    throw std::invalid_argument("queue_position_value: level index must be >= 1 (got " +
                                std::to_string(i) + ")");
  const double h = book.grid.d + (i - 1) * book.grid.alpha;
  const double prev = (i == 1) ? 0.0 : cumulative_depth(book, i - 1);
  return queue_value_at(book.equilibrium.params, h, prev);
}

// Variance per trade with tick alpha >= 0:
// E[B^2] (mu + alpha/2) / E[|B| 1_{|B| > mu + alpha/2}]; alpha = 0 reduces to
// the zero-tick formula, and with x0 = mu + alpha/2 it equals
// ((k-1)/(k-2)) (mu + alpha/2)^2.
inline double variance_per_trade(double mu, double alpha, const JumpLaw& law) {
  if (alpha < 0.0) throw std::invalid_argument("variance_per_trade: alpha must be >= 0");
  const double half = mu + 0.5 * alpha;
  return jump_second_moment(law) * half / jump_abs_upper_mean(law, half);
}

// Reflected configuration used for bid-side queue values.
inline DiscreteBook reflected_book(const DiscreteBook& book) {
  const double d2 = book.grid.d > 0.0 ? book.grid.alpha - book.grid.d : 0.0;
  return make_discrete_book(TickGrid(book.grid.alpha, d2), book.equilibrium, book.n_levels);
}

// Queue value of bid level i <= -1 via the reflection convention.
inline double bid_queue_position_value(const DiscreteBook& book, int i) {
  if (i >= 0) throw std::invalid_argument("bid_queue_position_value: level index must be <= -1");
  const DiscreteBook refl = reflected_book(book);
  const int j = book.grid.d > 0.0 ? -i : -i + 1;
  return queue_position_value(refl, j);
}

}  // namespace lob
