#pragma once

#include "relaynet/channel.hpp"

namespace relaynet {

/// Z = sum of N i.i.d. two-sided exponential variables y_k. A single y_k has
/// density
///   a b / (a + b) * exp(-a y)   for y > 0
///   a b / (a + b) * exp( b y)   for y < 0
/// with a = positive_rate and b = negative_rate.
///
/// For the direct link, y_k = |h_11(k)|^2 - gamma |h_12(k)|^2, so the positive
/// tail belongs to the desired link (a = 1/sigma_1^2) and the negative tail to
/// the scaled interferer (b = 1/(gamma sigma_2^2)).
struct DiffExpParams {
  double positive_rate = 1.0;
  double negative_rate = 1.0;
  int n = 3;

  void validate() const;
};

DiffExpParams interference_params(const SystemConfig& cfg);

/// Outage threshold on Z: N sigma^2 gamma / P.
double interference_threshold(const SystemConfig& cfg);

/// Interference-free outage: the chi-square(2N) CDF at 2N sigma^2 gamma / (P sigma_1^2).
double outage_single_user(const SystemConfig& cfg);

/// Closed-form density of Z for N = 3.
double pdf_diff_exp_n3(double z, const DiffExpParams& p);

/// Closed-form CDF Pr{Z <= c} for N = 3, by exact integration of the
/// polynomial-times-exponential pieces.
double cdf_diff_exp_n3(double c, const DiffExpParams& p);

/// Direct-link outage with inter-cell interference, N = 3 closed form.
double outage_interference_n3(const SystemConfig& cfg);

/// Characteristic function of Z at t.
cplx characteristic_function(double t, const DiffExpParams& p);

/// Pr{Z <= c} for any N by Gil-Pelaez inversion of the characteristic
/// function with adaptive Gauss-Kronrod quadrature. Throws NumericError if the
/// estimated quadrature error exceeds `tol`.
double cdf_by_inversion(double c, const DiffExpParams& p, double tol = 1e-9);

/// Direct-link outage with interference for any N via cdf_by_inversion.
double cf_inversion_outage(const SystemConfig& cfg, double tol = 1e-9);

/// Outage after L independent attempts.
double arq_outage(double p, int attempts);

}  // namespace relaynet
