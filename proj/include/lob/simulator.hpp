#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ticked_book.hpp"

namespace lob {

// Event-driven Monte Carlo of the three-agent mechanism: compound-Poisson
// efficient-price jumps consumed by the informed trader, noise orders eating
// the book from the best level inward, and market makers requoting the full
// equilibrium book after every event.
struct SimConfig {
  double lambda_i = 2.0 / 3.0;  // jump (informed) event intensity
  double lambda_u = 1.0 / 3.0;  // noise event intensity
  JumpLaw jump{3.0, 0.005};
  VolumeLaw volume{1.0};
  double alpha = 0.01;  // tick size; 0 selects continuous-price mode
  double p0 = 100.0;    // initial efficient price
  long long n_events = 1000000;
  std::uint64_t seed = 42;
  int n_levels = 50;  // book truncation per side
  int n_slices = 10;  // queue slices per level for P&L bucketing

  double r() const { return lambda_i / (lambda_i + lambda_u); }
};

inline void validate_config(const SimConfig& cfg) {
  if (!(cfg.lambda_i > 0.0)) throw std::invalid_argument("sim.lambda_i must be > 0");
  if (!(cfg.lambda_u > 0.0)) throw std::invalid_argument("sim.lambda_u must be > 0");
  if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("sim.alpha (tick) must be >= 0");
  if (!(cfg.p0 > 0.0)) throw std::invalid_argument("sim.p0 must be > 0");
  if (!(cfg.n_events > 0)) throw std::invalid_argument("sim.n_events must be > 0");
  if (!(cfg.n_levels >= 1)) throw std::invalid_argument("sim.n_levels must be >= 1");
  if (!(cfg.n_slices >= 1)) throw std::invalid_argument("sim.n_slices must be >= 1");
}

struct TradeEvent {
  double time = 0.0;
  bool informed = false;  // initiator: price jump vs noise order
  double size = 0.0;      // signed executed volume; 0 for a jump clearing nothing
  double price_pre = 0.0;
  double price_post = 0.0;
  std::vector<std::pair<int, double>> fills;  // (signed level index, executed volume)
};

namespace detail {
struct Welford {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double se() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};
}  // namespace detail

// Per-(level, slice) realized profit per unit, conditional on execution.
struct SliceStat {
  long long executions = 0;
  double mean_profit = 0.0;
  double se = 0.0;
};

// Zero-volume probe orders pinned to the top and bottom of each level's
// queue. The top probe executes whenever the level is touched (its expected
// profit is the queue position value); the bottom probe executes only when
// the level is fully consumed (the marginal order, expected profit zero).
struct ProbeStat {
  long long executions = 0;
  double mean_profit = 0.0;
  double se = 0.0;
  double mean_predicted = 0.0;  // offset-matched analytic value, averaged over executions
  double diff_se = 0.0;         // standard error of (realized - predicted)
};

struct SimStats {
  long long n_events = 0;
  long long n_jumps = 0;
  long long n_noise = 0;
  long long n_trades = 0;
  long long n_informed_trades = 0;
  double total_time = 0.0;
  double time_avg_spread = 0.0;
  double variance_per_trade = 0.0;
  double variance_per_trade_se = 0.0;
  double informed_share = 0.0;
  double informed_share_se = 0.0;
  long long clip_count = 0;
  bool truncation_biased = false;
  double d_mean = 0.0;
  double d_std = 0.0;
  std::vector<double> d_histogram;  // time-weighted masses, 20 bins on [0, alpha)
  int n_slices = 0;
  int tracked_levels = 0;  // slice/probe accounting depth per side
  // level-major layout: [(level-1) * n_slices + (slice-1)]
  std::vector<SliceStat> ask_slices, bid_slices;
  std::vector<ProbeStat> ask_top, ask_bottom, bid_top, bid_bottom;  // [level-1]
};

// Probability that a jump event trades, conditional on the grid offset d:
// the jump must clear the first populated limit on its side.
inline double jump_trade_trigger(double mu, double alpha, double d, const JumpLaw& law) {
  const TickGrid grid(alpha, d);
  auto [kr, kl] = first_limits(mu, grid);
  const double tau_r = d + (kr - 1) * alpha;
  const double tau_l = kl * alpha - d;
  return 0.5 * (jump_abs_survival(law, tau_r) + jump_abs_survival(law, tau_l));
}

// Analytic informed share of trades: r q / (r q + 1 - r) with q the
// probability that a jump trades, averaged over the stationary (uniform)
// offset distribution in ticked mode.
inline double informed_share_prediction(const SimConfig& cfg) {
  validate_config(cfg);
  const double r = cfg.r();
  const MarketParams params(r, cfg.jump, cfg.volume);
  const double mu = solve_half_spread(params);
  double qbar;
  if (cfg.alpha == 0.0) {
    qbar = jump_abs_survival(cfg.jump, mu);
  } else {
    const double alpha = cfg.alpha;
    // the integrand has kinks where the first-limit indices change
    const double dstar = std::fmod(mu, alpha);
    std::vector<double> cuts{0.0, alpha};
    if (dstar > 0.0 && dstar < alpha) {
      cuts.push_back(dstar);
      const double mirror = alpha - dstar;
      if (std::fabs(mirror - dstar) > 1e-15 * alpha) cuts.push_back(mirror);
    }
    std::sort(cuts.begin(), cuts.end());
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (b - a <= 1e-15 * alpha) continue;
      // stay strictly inside the piece so first_limits sees consistent indices
      const double eps = 1e-12 * alpha;
      integral += adaptive_simpson(
          [&](double d) {
            double dd = std::min(std::max(d, a + eps), b - eps);
            return jump_trade_trigger(mu, alpha, dd, cfg.jump);
          },
          a, b, 1e-14);
    }
    qbar = integral / alpha;
  }
  return r * qbar / (r * qbar + 1.0 - r);
}

inline SimStats run(const SimConfig& cfg,
                    const std::function<void(const TradeEvent&)>& on_event = {}) {
  validate_config(cfg);
  const double r = cfg.r();
  const double total_rate = cfg.lambda_i + cfg.lambda_u;
  const MarketParams params(r, cfg.jump, cfg.volume);
  const EquilibriumBook eq = solve_equilibrium(params);
  const double mu = eq.mu;
  const double alpha = cfg.alpha;
  const bool ticked = alpha > 0.0;
  const double inv_k = 1.0 / cfg.jump.k;
  const double x0 = cfg.jump.x0;

  std::mt19937_64 rng(cfg.seed);
  auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53 + 0x1.0p-54; };

  // grid state
  double P = cfg.p0;
  double d = 0.0;
  int k_r = 1, k_l = 1;
  auto requote = [&]() {
    if (!ticked) return;
    d = std::ceil(P / alpha) * alpha - P;
    if (d >= alpha) d -= alpha;
    if (d < 0.0) d = 0.0;
    const double inner = std::ceil((mu - d) / alpha);
    k_r = 1 + static_cast<int>(inner > 0.0 ? inner : 0.0);
    k_l = static_cast<int>(std::ceil((mu + d) / alpha));
    if (k_l < 1) k_l = 1;
  };
  requote();

  // side-agnostic helpers; j is the 1-based level rank on a side
  auto off_mag = [&](bool ask, long long j) {
    return ask ? d + static_cast<double>(j - 1) * alpha : static_cast<double>(j) * alpha - d;
  };
  auto cum_mag = [&](bool ask, long long j) {
    return cumulative_shape(eq, off_mag(ask, j));  // odd shape: magnitude via positive offset
  };
  auto first_level = [&](bool ask) { return ask ? k_r : k_l; };

  // accounting
  const int tracked = ticked ? std::min(10, cfg.n_levels) : 0;
  std::vector<detail::Welford> slice_w[2];  // [ask][level*slice]
  std::vector<detail::Welford> top_w[2], bottom_w[2], top_pred_w[2], top_diff_w[2];
  for (int s = 0; s < 2; ++s) {
    slice_w[s].assign(static_cast<std::size_t>(tracked) * cfg.n_slices, {});
    top_w[s].assign(tracked, {});
    bottom_w[s].assign(tracked, {});
    top_pred_w[s].assign(tracked, {});
    top_diff_w[s].assign(tracked, {});
  }
  auto record_execution = [&](bool ask, long long j, double profit, double prev_cum,
                              int slices_touched, bool full) {
    if (j > tracked) return;
    const int side = ask ? 0 : 1;
    const std::size_t base = static_cast<std::size_t>(j - 1) * cfg.n_slices;
    for (int s = 0; s < slices_touched; ++s) slice_w[side][base + s].add(profit);
    const double predicted = queue_value_at(params, off_mag(ask, j), prev_cum);
    top_w[side][j - 1].add(profit);
    top_pred_w[side][j - 1].add(predicted);
    top_diff_w[side][j - 1].add(profit - predicted);
    if (full) bottom_w[side][j - 1].add(profit);
  };

  double t = 0.0;
  double spread_time = 0.0;
  double d_time_sum = 0.0, d_time_sq = 0.0;
  constexpr int kDBins = 20;
  std::vector<double> d_bins(ticked ? kDBins : 0, 0.0);

  detail::Welford var_w;
  double p_last_trade = std::numeric_limits<double>::quiet_NaN();

  long long n_jumps = 0, n_noise = 0, n_trades = 0, n_informed_trades = 0;
  long long clip_count = 0;

  TradeEvent ev;
  const bool tracing = static_cast<bool>(on_event);

  for (long long step = 0; step < cfg.n_events; ++step) {
    const double u_dt = unit();
    const double dt = -std::log(u_dt) / total_rate;
    // the book holds its pre-event state over (t, t+dt)
    const double spread_now = ticked ? alpha * (k_r + k_l - 1) : 2.0 * mu;
    spread_time += spread_now * dt;
    if (ticked) {
      d_time_sum += d * dt;
      d_time_sq += d * d * dt;
      int bin = static_cast<int>(d / alpha * kDBins);
      if (bin >= kDBins) bin = kDBins - 1;
      if (bin < 0) bin = 0;
      d_bins[static_cast<std::size_t>(bin)] += dt;
    }
    t += dt;

    const double u_type = unit();
    const double u_payload = unit();
    const double price_pre = P;
    bool is_jump = u_type < r;
    double executed_signed = 0.0;
    if (tracing) {
      ev.fills.clear();
      ev.time = t;
      ev.informed = is_jump;
      ev.price_pre = price_pre;
    }

    if (is_jump) {
      ++n_jumps;
      double B;
      if (u_payload < 0.5)
        B = -x0 * std::pow(2.0 * u_payload, -inv_k);
      else
        B = x0 * std::pow(2.0 * (1.0 - u_payload), -inv_k);
      const bool ask = B > 0.0;
      const double bmag = std::fabs(B);

      if (ticked) {
        const long long first = first_level(ask);
        long long m = ask ? static_cast<long long>(std::ceil((bmag - d) / alpha))
                          : static_cast<long long>(std::ceil((bmag + d) / alpha)) - 1;
        while (m >= 1 && !(off_mag(ask, m) < bmag)) --m;
        while (off_mag(ask, m + 1) < bmag) ++m;
        if (m > cfg.n_levels) {
          ++clip_count;
          m = cfg.n_levels;
        }
        if (m >= first) {
          double prev = 0.0;
          for (long long j = first; j <= m; ++j) {
            const double cum = cum_mag(ask, j);
            const double profit = off_mag(ask, j) - bmag;  // per unit, against post price
            record_execution(ask, j, profit, prev, cfg.n_slices, true);
            if (tracing && j <= m)
              ev.fills.emplace_back(static_cast<int>(ask ? j : -j), cum - prev);
            prev = cum;
          }
          executed_signed = ask ? prev : -prev;
        }
      } else {
        if (bmag > mu) {
          const double depth = cumulative_shape(eq, bmag);
          executed_signed = ask ? depth : -depth;
        }
      }
      P += B;
      requote();
    } else {
      ++n_noise;
      const double Q = volume_quantile(cfg.volume, u_payload);
      const bool ask = Q > 0.0;
      const double qmag = std::fabs(Q);
      if (ticked) {
        double remaining = qmag;
        double prev = 0.0;
        long long j = first_level(ask);
        while (remaining > 0.0 && j <= cfg.n_levels) {
          const double cum = cum_mag(ask, j);
          const double lvol = cum - prev;
          if (lvol > 0.0) {
            const double take = remaining < lvol ? remaining : lvol;
            const bool full = remaining >= lvol;
            int touched = full ? cfg.n_slices
                               : static_cast<int>(std::ceil(take / lvol * cfg.n_slices));
            if (touched < 1) touched = 1;
            if (touched > cfg.n_slices) touched = cfg.n_slices;
            const double profit = off_mag(ask, j);  // post-event price unchanged
            record_execution(ask, j, profit, prev, touched, full);
            if (tracing) ev.fills.emplace_back(static_cast<int>(ask ? j : -j), take);
            remaining -= take;
          }
          prev = cum;
          ++j;
        }
        if (remaining > 0.0) ++clip_count;
        const double filled = qmag - remaining;
        executed_signed = ask ? filled : -filled;
      } else {
        executed_signed = Q;  // continuous book is unbounded
      }
      // requote restores the consumed liquidity; d is unchanged
    }

    if (executed_signed != 0.0) {
      ++n_trades;
      if (is_jump) ++n_informed_trades;
      if (!std::isnan(p_last_trade)) {
        const double dp = P - p_last_trade;
        var_w.add(dp * dp);
      }
      p_last_trade = P;
    }
    if (tracing) {
      ev.size = executed_signed;
      ev.price_post = P;
      on_event(ev);
    }
  }

  SimStats stats;
  stats.n_events = cfg.n_events;
  stats.n_jumps = n_jumps;
  stats.n_noise = n_noise;
  stats.n_trades = n_trades;
  stats.n_informed_trades = n_informed_trades;
  stats.total_time = t;
  stats.time_avg_spread = t > 0.0 ? spread_time / t : 0.0;
  stats.variance_per_trade = var_w.mean;
  stats.variance_per_trade_se = var_w.se();
  if (n_trades > 0) {
    const double p = static_cast<double>(n_informed_trades) / static_cast<double>(n_trades);
    stats.informed_share = p;
    stats.informed_share_se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_trades));
  }
  stats.clip_count = clip_count;
  stats.truncation_biased =
      clip_count > 0 &&
      static_cast<double>(clip_count) / static_cast<double>(cfg.n_events) > 1e-4;
  if (ticked && t > 0.0) {
    stats.d_mean = d_time_sum / t;
    const double var_d = d_time_sq / t - stats.d_mean * stats.d_mean;
    stats.d_std = var_d > 0.0 ? std::sqrt(var_d) : 0.0;
    stats.d_histogram.resize(kDBins);
    for (int b = 0; b < kDBins; ++b) stats.d_histogram[b] = d_bins[b] / t;
  }
  stats.n_slices = cfg.n_slices;
  stats.tracked_levels = tracked;
  auto fill_stats = [&](int side, std::vector<SliceStat>& slices, std::vector<ProbeStat>& top,
                        std::vector<ProbeStat>& bottom) {
    slices.resize(static_cast<std::size_t>(tracked) * cfg.n_slices);
    top.resize(tracked);
    bottom.resize(tracked);
    for (int j = 0; j < tracked; ++j) {
      for (int s = 0; s < cfg.n_slices; ++s) {
        const auto& w = slice_w[side][static_cast<std::size_t>(j) * cfg.n_slices + s];
        slices[static_cast<std::size_t>(j) * cfg.n_slices + s] = {w.n, w.mean, w.se()};
      }
      const auto& tw = top_w[side][j];
      top[j] = {tw.n, tw.mean, tw.se(), top_pred_w[side][j].mean, top_diff_w[side][j].se()};
      const auto& bw = bottom_w[side][j];
      bottom[j] = {bw.n, bw.mean, bw.se(), 0.0, bw.se()};
    }
  };
  fill_stats(0, stats.ask_slices, stats.ask_top, stats.ask_bottom);
  fill_stats(1, stats.bid_slices, stats.bid_top, stats.bid_bottom);
  return stats;
}

}  // namespace lob
