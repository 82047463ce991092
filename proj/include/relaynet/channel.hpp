#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "relaynet/linalg.hpp"

namespace relaynet {

/// Scalar parameters of the two-cell downlink with a shared relay.
/// Powers and variances are linear; `rate` is in bits/s/Hz.
struct SystemConfig {
  int n_bs_antennas = 3;      // N
  int n_relay_antennas = 3;   // M
  double bs_power = 1.0;      // P
  double relay_power_single = 1.0;
  double relay_power_multi = 2.0;
  double noise_var = 1.0;     // sigma^2
  double var_direct = 2.0;    // sigma_1^2
  double var_cross = 1.0;     // sigma_2^2
  double var_relay = 4.0;     // sigma_3^2
  double rate = 2.0;          // R
  int retx_budget = 1;        // L, total transmission attempts

  /// gamma = 2^R - 1
  double sinr_threshold() const;

  /// Throws ContractError describing the first violated invariant.
  void validate() const;

  /// Sets bs_power from a transmit SNR (P / sigma^2) in dB and ties the relay
  /// powers to it: Pr = P in single-user mode, Pr = 2P in multiuser mode.
  void set_snr_db(double snr_db);
  double snr_db() const;
};

/// One fading draw. bs[i][j] is the N-vector from BS j to user i; relay[i] is
/// the M-vector from the relay to user i (zero-based user indices).
struct ChannelRealization {
  std::array<std::array<ComplexVector, 2>, 2> bs;
  std::array<ComplexVector, 2> relay;
};

/// Random stream for one Monte Carlo trial. The stream for (seed, index) is
/// fixed, so trial results do not depend on how trials are scheduled.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial_index);

  /// Circularly symmetric complex Gaussian with E|x|^2 = variance.
  cplx complex_gaussian(double variance);
  ComplexVector complex_gaussian_vector(Eigen::Index n, double variance);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// BS -> user links only (relay vectors left empty).
void draw_bs_channels(const SystemConfig& cfg, TrialRng& rng, ChannelRealization& out);
/// Relay -> user links only.
void draw_relay_channels(const SystemConfig& cfg, TrialRng& rng, ChannelRealization& out);

ChannelRealization draw_channels(const SystemConfig& cfg, TrialRng& rng);

}  // namespace relaynet
