// Sweeps the grid offset d and prints queue position values for the first
// four ask limits, showing the rise-then-fall pattern across limits and the
// monotone improvement of the best quote as d grows.
#include <cstdio>

#include "lob/calibration.hpp"
#include "lob/ticked_book.hpp"

int main() {
  // a thick-tailed stock quoted at about two ticks of spread
  const double k = 3.478, spread = 0.020, ticks = 2.040;
  const double alpha = spread / ticks, x0 = spread / 2.0;
  const lob::MarketParams params(lob::derive_r(k), lob::JumpLaw(k, x0), lob::VolumeLaw(1.0));
  const lob::EquilibriumBook eq = lob::solve_equilibrium(params);

  std::printf("k = %.3f  r = %.3f  tick = %.6f  half spread = %.6f\n\n", k, params.r, alpha,
              eq.mu);
  std::printf("%8s %12s %12s %12s %12s\n", "d/tick", "limit 1", "limit 2", "limit 3",
              "limit 4");
  for (const double f : {0.25, 0.5, 0.75}) {
    const lob::DiscreteBook book = lob::make_discrete_book(lob::TickGrid(alpha, f * alpha), eq);
    std::printf("%8.2f", f);
    for (int i = 1; i <= 4; ++i) std::printf(" %12.6f", lob::queue_position_value(book, i));
    std::printf("\n");
  }
  return 0;
}
