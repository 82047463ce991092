#pragma once

#include <array>
#include <cstdint>

#include "relaynet/channel.hpp"
#include "relaynet/relay_multi.hpp"

namespace relaynet {

/// Empirical outage with a 3-sigma normal-approximation half width.
struct OutageEstimate {
  std::int64_t trials = 0;
  std::int64_t failures = 0;

  double p_hat() const;
  double ci_halfwidth() const;
  OutageEstimate& operator+=(const OutageEstimate& other);
};

enum class RelayMode { none, single_user, multiuser };

const char* to_string(RelayMode m);

struct TrialOutcome {
  std::array<bool, 2> failed_round1{};
  RelayMode mode = RelayMode::none;
  std::array<bool, 2> final_success{};
  bool solver_failed = false;
};

struct DirectResult {
  std::array<OutageEstimate, 2> user;
  OutageEstimate pooled;
};

struct RelayResult {
  std::array<OutageEstimate, 2> user;
  OutageEstimate pooled;
  std::array<std::int64_t, 3> mode_counts{};  // indexed by RelayMode
  std::int64_t solver_failures = 0;
};

/// Direct ARQ: each user's message fails iff all retx_budget attempts are in
/// outage; channels are redrawn for every attempt.
TrialOutcome direct_trial(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t index);

/// Shared-relay ARQ with one retransmission round.
TrialOutcome relay_trial(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t index,
                         const MultiOptions& opts);

/// OpenMP drivers; threads <= 0 uses the runtime default.
DirectResult simulate_direct(const SystemConfig& cfg, std::int64_t trials, std::uint64_t seed,
                             int threads = 0);
RelayResult simulate_relay(const SystemConfig& cfg, std::int64_t trials, std::uint64_t seed,
                           const MultiOptions& opts = {}, int threads = 0);

/// Single-threaded reference loops with identical per-trial streams.
DirectResult simulate_direct_serial(const SystemConfig& cfg, std::int64_t trials,
                                    std::uint64_t seed);
RelayResult simulate_relay_serial(const SystemConfig& cfg, std::int64_t trials,
                                  std::uint64_t seed, const MultiOptions& opts = {});

}  // namespace relaynet
