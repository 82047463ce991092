#include "relaynet/channel.hpp"

#include <cmath>
#include <string>

namespace relaynet {

double SystemConfig::sinr_threshold() const { return std::exp2(rate) - 1.0; }

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ContractError("SystemConfig: " + msg); };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be positive and finite");
  };
  if (n_bs_antennas < 1) fail("n_bs_antennas must be >= 1");
  if (n_relay_antennas < 1) fail("n_relay_antennas must be >= 1");
  positive(bs_power, "bs_power");
  positive(relay_power_single, "relay_power_single");
  positive(relay_power_multi, "relay_power_multi");
  positive(noise_var, "noise_var");
  positive(var_direct, "var_direct");
  positive(var_cross, "var_cross");
  positive(var_relay, "var_relay");
  if (!(rate >= 0.0) || !std::isfinite(rate)) fail("rate must be nonnegative and finite");
  if (retx_budget < 1) fail("retx_budget must be >= 1");
}

void SystemConfig::set_snr_db(double snr_db) {
  bs_power = noise_var * std::pow(10.0, snr_db / 10.0);
  relay_power_single = bs_power;
  relay_power_multi = 2.0 * bs_power;
}

double SystemConfig::snr_db() const { return 10.0 * std::log10(bs_power / noise_var); }

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial_index),
                    static_cast<std::uint32_t>(trial_index >> 32)};
  engine_.seed(seq);
}

cplx TrialRng::complex_gaussian(double variance) {
  const double sd = std::sqrt(0.5 * variance);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {sd * re, sd * im};
}

ComplexVector TrialRng::complex_gaussian_vector(Eigen::Index n, double variance) {
  ComplexVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = complex_gaussian(variance);
  return v;
}

void draw_bs_channels(const SystemConfig& cfg, TrialRng& rng, ChannelRealization& out) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.bs[i][j] =
          rng.complex_gaussian_vector(cfg.n_bs_antennas, i == j ? cfg.var_direct : cfg.var_cross);
}

void draw_relay_channels(const SystemConfig& cfg, TrialRng& rng, ChannelRealization& out) {
  for (int i = 0; i < 2; ++i)
    out.relay[i] = rng.complex_gaussian_vector(cfg.n_relay_antennas, cfg.var_relay);
}

ChannelRealization draw_channels(const SystemConfig& cfg, TrialRng& rng) {
  cfg.validate();
  ChannelRealization out;
  draw_bs_channels(cfg, rng, out);
  draw_relay_channels(cfg, rng, out);
  return out;
}

}  // namespace relaynet
