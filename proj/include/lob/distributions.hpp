#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "numerics.hpp"

namespace lob {

enum class JumpFamily { ParetoSymmetric };
enum class VolumeFamily { Normal };

// Law of the efficient-price jump B: |B| ~ Pareto(k, x0), sign +/-1 with
// probability 1/2 each, independent of |B|. Requires k > 2 so that B is
// square integrable.
struct JumpLaw {
  JumpFamily family = JumpFamily::ParetoSymmetric;
  double k = 3.0;
  double x0 = 0.005;

  JumpLaw(double shape, double scale, JumpFamily fam = JumpFamily::ParetoSymmetric)
      : family(fam), k(shape), x0(scale) {
    if (!(k > 2.0))
      throw std::invalid_argument("jump.k must be > 2 (got " + std::to_string(k) + ")");
    if (!(x0 > 0.0))
      throw std::invalid_argument("jump.x0 must be > 0 (got " + std::to_string(x0) + ")");
  }
};

// Law of the signed noise-trader order size Q^u: Normal(0, sigma).
// Positive = buy, negative = sell.
struct VolumeLaw {
  VolumeFamily family = VolumeFamily::Normal;
  double sigma = 1.0;

  explicit VolumeLaw(double sd, VolumeFamily fam = VolumeFamily::Normal)
      : family(fam), sigma(sd) {
    if (!(sigma > 0.0))
      throw std::invalid_argument("volume.sigma must be > 0 (got " + std::to_string(sigma) + ")");
  }
};

// P[|B| > x] for x >= 0.
inline double jump_abs_survival(const JumpLaw& law, double x) {
  if (x < law.x0) return 1.0;
  return std::pow(law.x0 / x, law.k);
}

// F_psi(x) = P[B <= x], total on the reals; F_psi(-x) = 1 - F_psi(x).
inline double jump_cdf(const JumpLaw& law, double x) {
  if (x >= 0.0) return 1.0 - 0.5 * jump_abs_survival(law, x);
  return 0.5 * jump_abs_survival(law, -x);
}

// E[B 1_{B > x}] for x >= 0.
inline double jump_upper_mean(const JumpLaw& law, double x) {
  if (x < 0.0)
    throw std::domain_error("jump_upper_mean: x must be >= 0 (use symmetry for the bid side)");
  const double k = law.k, x0 = law.x0;
  if (x < x0) return 0.5 * k * x0 / (k - 1.0);
  return 0.5 * (k / (k - 1.0)) * x * std::pow(x0 / x, k);
}

// E[|B| 1_{|B| > x}] for x >= 0.
inline double jump_abs_upper_mean(const JumpLaw& law, double x) {
  if (x < 0.0) throw std::domain_error("jump_abs_upper_mean: x must be >= 0");
  return 2.0 * jump_upper_mean(law, x);
}

// E[B^2].
inline double jump_second_moment(const JumpLaw& law) {
  return law.k * law.x0 * law.x0 / (law.k - 2.0);
}

// E[max(B/x, 1)] for x > 0; strictly decreasing in x with limit 1.
inline double expected_max_ratio(const JumpLaw& law, double x) {
  if (!(x > 0.0)) throw std::domain_error("expected_max_ratio: x must be > 0");
  const double k = law.k, x0 = law.x0;
  if (x >= x0) return 1.0 + std::pow(x0 / x, k) / (2.0 * (k - 1.0));
  return 0.5 + k * x0 / (2.0 * (k - 1.0) * x);
}

// F_ku(q) = P[Q^u <= q].
inline double volume_cdf(const VolumeLaw& law, double q) {
  return 0.5 * std::erfc(-q / (law.sigma * std::sqrt(2.0)));
}

// Inverse of volume_cdf on (0,1), by bracketed bisection on the CDF with
// absolute tolerance 1e-12 in the argument; brackets expand geometrically
// from +/- sigma.
inline double volume_quantile(const VolumeLaw& law, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("volume_quantile: p must lie in (0,1) (got " + std::to_string(p) + ")");
  if (p == 0.5) return 0.0;
  double lo = -law.sigma, hi = law.sigma;
  while (volume_cdf(law, lo) > p) lo *= 2.0;
  while (volume_cdf(law, hi) < p) hi *= 2.0;
  return bisect([&](double q) { return volume_cdf(law, q) - p; }, lo, hi, 1e-12);
}

}  // namespace lob
