// Builds the default market's equilibrium book and prints the first few
// limits on each side, with their gains and queue position values.
#include <cstdio>

#include "lob/ticked_book.hpp"

int main() {
  const lob::MarketParams params(2.0 / 3.0, lob::JumpLaw(3.0, 0.005), lob::VolumeLaw(1.0));
  const lob::EquilibriumBook eq = lob::solve_equilibrium(params);
  std::printf("half spread mu = %.6f  (target E[max(B/mu,1)] = %.6f)\n", eq.mu,
              lob::half_spread_target(params.r));

  const lob::TickGrid grid(0.01, 0.0075);
  const lob::DiscreteBook book = lob::make_discrete_book(grid, eq);
  std::printf("tick %.4f, offset %.4f -> first ask limit %d, first bid limit %d\n",
              grid.alpha, grid.d, book.k_r, -book.k_l);
  std::printf("conditional spread = %.4f, offset-averaged spread = %.4f\n\n",
              lob::conditional_spread(eq.mu, grid), lob::average_spread(eq.mu, grid.alpha));

  std::printf("%5s %7s %10s %10s %10s %12s\n", "side", "limit", "offset", "volume", "depth",
              "queue value");
  for (int i = -4; i <= 4; ++i) {
    if (i == 0) continue;
    const double qv = i > 0 ? lob::queue_position_value(book, i)
                            : lob::bid_queue_position_value(book, i);
    std::printf("%5s %7d %10.4f %10.4f %10.4f %12.6f\n", i > 0 ? "ask" : "bid", i,
                lob::level_offset(book, i), lob::level_volume(book, i),
                lob::cumulative_depth(book, i), qv);
  }
  return 0;
}
