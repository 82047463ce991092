#pragma once

// Reference computations used only by the tests. Each one takes a route that
// differs from the library code it checks.

#include <algorithm>
#include <cmath>
#include <array>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relaynet/linalg.hpp"

namespace relaynet::oracle {

/// Chi-square(2k) CDF at 2x for integer k: 1 - e^{-x} sum_{j<k} x^j / j!.
inline double gamma_p_integer(int k, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < k; ++j) {
    term *= x / j;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

/// Density of the sum of n two-sided exponentials (rates a on the right, b on
/// the left) by direct Fourier inversion of the characteristic function:
///   f(z) = (1/pi) int_0^inf Re[e^{-itz} phi(t)] dt.
inline double pdf_by_inversion(double z, double a, double b, int n) {
  using C = std::complex<double>;
  auto integrand = [&](double t) {
    const C phi = std::pow(a * b / ((a - C(0, t)) * (b + C(0, t))), n);
    return (std::exp(C(0, -t * z)) * phi).real();
  };
  // |phi(t)| <= (ab)^n / t^{2n}; truncate where the tail integral < 1e-13.
  const double tail = 1e-13;
  const double top =
      std::pow(std::pow(a * b, n) / ((2 * n - 1) * tail), 1.0 / (2 * n - 1));
  // Pieces grow geometrically but never span more than four periods of e^{-itz}.
  const double cap = z == 0.0 ? 1e300 : 8.0 * std::numbers::pi / std::abs(z);
  double total = 0.0;
  double lo = 0.0;
  double len = 0.25 * std::min(a, b);
  while (lo < top) {
    const double hi = std::min(lo + std::min(len, cap), top);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 0, 0.0);
    lo = hi;
    len *= 1.5;
  }
  return total / std::numbers::pi;
}

/// Pr{Z <= c} by integrating a density over (-inf, c] with exp-sinh quadrature,
/// split at zero where the density has a kink.
template <class Pdf>
double cdf_by_density_quadrature(double c, Pdf pdf) {
  boost::math::quadrature::exp_sinh<double> half_line;
  auto left = [&](double u) { return pdf(std::min(c, 0.0) - u); };
  double total = half_line.integrate(left, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
  if (c > 0.0) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, 0.0, c, 15, 1e-14);
  }
  return total;
}

/// Max-min SINR with zero cross-interference: user i gets power p_i along
/// h_i / |h_i|, so SINR_i = p_i |h_i|^2 / sigma^2. Equalising gives the optimum.
inline double orthogonal_tstar(const ComplexVector& h1, const ComplexVector& h2, double power,
                               double noise) {
  return power / (noise * (1.0 / h1.squaredNorm() + 1.0 / h2.squaredNorm()));
}

/// Best min-SINR for fixed unit beam directions w1, w2 over the power split
/// p1 + p2 = power, by bisection on p1 (SINR_1 increases, SINR_2 decreases).
inline double best_split(double g11, double g12, double g21, double g22, double power,
                         double noise) {
  // g_ij = |h_i^H w_j|^2
  auto s1 = [&](double p1) { return p1 * g11 / ((power - p1) * g12 + noise); };
  auto s2 = [&](double p1) { return (power - p1) * g22 / (p1 * g21 + noise); };
  double lo = 0.0;
  double hi = power;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (s1(mid) < s2(mid) ? lo : hi) = mid;
  }
  return std::min(s1(lo), s2(lo));
}

/// Exhaustive search over rank-one beamformer pairs for M = 2. Each unit
/// direction is (cos th, sin th e^{i ph}); the grid has `steps`^4 points and
/// the best point is then polished by a shrinking pattern search.
inline double brute_force_tstar_m2(const ComplexVector& h1, const ComplexVector& h2,
                                   double power, double noise, int steps) {
  using C = std::complex<double>;
  auto gain = [](const ComplexVector& h, double th, double ph) {
    const C inner = std::conj(h(0)) * std::cos(th) + std::conj(h(1)) * std::sin(th) * std::exp(C(0, ph));
    return std::norm(inner);
  };
  auto value = [&](const std::array<double, 4>& x) {
    return best_split(gain(h1, x[0], x[1]), gain(h1, x[2], x[3]), gain(h2, x[0], x[1]),
                      gain(h2, x[2], x[3]), power, noise);
  };
  const double half_pi = 0.5 * std::numbers::pi;
  const double two_pi = 2.0 * std::numbers::pi;
  std::array<double, 4> best{};
  double best_val = -1.0;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c)
        for (int d = 0; d < steps; ++d) {
          const std::array<double, 4> x{half_pi * (a + 0.5) / steps, two_pi * b / steps,
                                        half_pi * (c + 0.5) / steps, two_pi * d / steps};
          const double v = value(x);
          if (v > best_val) {
            best_val = v;
            best = x;
          }
        }
  std::array<double, 4> step{half_pi / steps, two_pi / steps, half_pi / steps, two_pi / steps};
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (int k = 0; k < 4; ++k)
      for (double sign : {1.0, -1.0}) {
        std::array<double, 4> x = best;
        x[k] += sign * step[k];
        const double v = value(x);
        if (v > best_val) {
          best_val = v;
          best = x;
          improved = true;
        }
      }
    if (!improved)
      for (double& s : step) s *= 0.5;
  }
  return best_val;
}

}  // namespace relaynet::oracle
