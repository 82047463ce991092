#include "relaynet/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace relaynet {

void DiffExpParams::validate() const {
  if (!(positive_rate > 0.0) || !(negative_rate > 0.0) || !std::isfinite(positive_rate) ||
      !std::isfinite(negative_rate))
    throw ContractError("DiffExpParams: rates must be positive and finite");
  if (n < 1) throw ContractError("DiffExpParams: n must be >= 1");
}

DiffExpParams interference_params(const SystemConfig& cfg) {
  cfg.validate();
  DiffExpParams p;
  p.positive_rate = 1.0 / cfg.var_direct;
  p.negative_rate = 1.0 / (cfg.sinr_threshold() * cfg.var_cross);
  p.n = cfg.n_bs_antennas;
  return p;
}

double interference_threshold(const SystemConfig& cfg) {
  return cfg.n_bs_antennas * cfg.noise_var * cfg.sinr_threshold() / cfg.bs_power;
}

double outage_single_user(const SystemConfig& cfg) {
  cfg.validate();
  const double x = 2.0 * cfg.n_bs_antennas * cfg.noise_var * cfg.sinr_threshold() /
                   (cfg.bs_power * cfg.var_direct);
  // chi-square(k) CDF at x is P(k/2, x/2)
  return boost::math::gamma_p(static_cast<double>(cfg.n_bs_antennas), 0.5 * x);
}

namespace {

void require_order3(const DiffExpParams& p) {
  p.validate();
  if (p.n != 3)
    throw ContractError("closed-form density is only available for N = 3 (got N = " +
                        std::to_string(p.n) + "); use cdf_by_inversion");
}

struct Order3Terms {
  double a, b, k, lin, cst;
};

Order3Terms order3_terms(const DiffExpParams& p) {
  const double a = p.positive_rate;
  const double b = p.negative_rate;
  const double s = a + b;
  const double ab = a * b;
  return {a, b, ab * ab * ab / (2.0 * s * s * s), 6.0 / s, 12.0 / (s * s)};
}

}  // namespace

double pdf_diff_exp_n3(double z, const DiffExpParams& p) {
  require_order3(p);
  const auto t = order3_terms(p);
  if (z >= 0.0) return t.k * std::exp(-t.a * z) * (z * z + t.lin * z + t.cst);
  return t.k * std::exp(t.b * z) * (z * z - t.lin * z + t.cst);
}

double cdf_diff_exp_n3(double c, const DiffExpParams& p) {
  require_order3(p);
  const auto t = order3_terms(p);
  if (c <= 0.0) {
    // int_{-inf}^c e^{bz} (z^2 - lin z + cst) dz
    const double b = t.b;
    const double poly = c * c / b - 2.0 * c / (b * b) + 2.0 / (b * b * b) -
                        t.lin * (c / b - 1.0 / (b * b)) + t.cst / b;
    return t.k * std::exp(b * c) * poly;
  }
  // 1 - int_c^inf e^{-az} (z^2 + lin z + cst) dz
  const double a = t.a;
  const double poly = c * c / a + 2.0 * c / (a * a) + 2.0 / (a * a * a) +
                      t.lin * (c / a + 1.0 / (a * a)) + t.cst / a;
  return 1.0 - t.k * std::exp(-a * c) * poly;
}

double outage_interference_n3(const SystemConfig& cfg) {
  return cdf_diff_exp_n3(interference_threshold(cfg), interference_params(cfg));
}

cplx characteristic_function(double t, const DiffExpParams& p) {
  const double a = p.positive_rate;
  const double b = p.negative_rate;
  const cplx single = (a * b) / (cplx(a, -t) * cplx(b, t));
  return std::pow(single, p.n);
}

namespace {

// Adaptive bisection around a fixed 61-point Gauss-Kronrod rule with an
// absolute error target. Accumulates the estimated error into `error`.
template <class F>
double integrate_abs(const F& f, double lo, double hi, double abs_tol, int depth, double& error) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 0, 0.0, &err);
  if (err <= abs_tol || depth == 0) {
    error += err;
    return value;
  }
  const double mid = 0.5 * (lo + hi);
  return integrate_abs(f, lo, mid, 0.5 * abs_tol, depth - 1, error) +
         integrate_abs(f, mid, hi, 0.5 * abs_tol, depth - 1, error);
}

}  // namespace

double cdf_by_inversion(double c, const DiffExpParams& p, double tol) {
  p.validate();
  const double a = p.positive_rate;
  const double b = p.negative_rate;
  const int n = p.n;

  // Gil-Pelaez: F(c) = 1/2 - (1/pi) int_0^inf Im[e^{-itc} phi(t)] / t dt
  auto integrand = [&](double t) {
    const cplx v = std::exp(cplx(0.0, -t * c)) * characteristic_function(t, p);
    return v.imag() / t;
  };

  // Two envelopes for |integrand|: (ab)^n / t^(2n+1) and min(a,b)^n / t^(n+1).
  // Their tails beyond T are (ab)^n / (2n T^(2n)) and min(a,b)^n / (n T^n);
  // truncate where the smaller one falls well below tol.
  const double tail_budget = 0.01 * tol * std::numbers::pi;
  const double upper =
      std::min(std::pow(std::pow(a * b, n) / (2.0 * n * tail_budget), 1.0 / (2.0 * n)),
               std::min(a, b) * std::pow(1.0 / (n * tail_budget), 1.0 / n));

  const double scale = std::min(a, b);
  const double max_piece =
      c == 0.0 ? std::numeric_limits<double>::infinity() : 40.0 * std::numbers::pi / std::abs(c);

  std::vector<double> edges{0.0};
  double left = 0.1 * scale;
  edges.push_back(std::min(left, upper));
  while (edges.back() < upper) {
    const double right = std::min(2.0 * edges.back(), upper);
    const double len = right - edges.back();
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_piece)));
    const double start = edges.back();
    for (int k = 1; k <= pieces; ++k) edges.push_back(k == pieces ? right : start + len * k / pieces);
  }

  // Absolute error budget per piece; a relative test never terminates on
  // pieces where the integrand vanishes identically (e.g. c = 0, a = b).
  const double piece_budget =
      0.05 * tol * std::numbers::pi / static_cast<double>(edges.size() - 1);
  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    total += integrate_abs(integrand, edges[k], edges[k + 1], piece_budget, 20, error);
  error /= std::numbers::pi;
  if (!(error <= 0.1 * tol) || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "cdf_by_inversion: quadrature did not converge (estimated error " << error
        << ", tolerance " << tol << ", pieces " << edges.size() - 1 << ", upper limit " << upper
        << ")";
    throw NumericError(msg.str());
  }
  return 0.5 - total / std::numbers::pi;
}

double cf_inversion_outage(const SystemConfig& cfg, double tol) {
  return cdf_by_inversion(interference_threshold(cfg), interference_params(cfg), tol);
}

double arq_outage(double p, int attempts) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError("arq_outage: p must lie in [0, 1]");
  if (attempts < 1) throw ContractError("arq_outage: attempts must be >= 1");
  return std::pow(p, attempts);
}

}  // namespace relaynet
