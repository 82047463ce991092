#pragma once

#include <functional>
#include <string>

#include "relaynet/csv.hpp"
#include "relaynet/run_config.hpp"

namespace relaynet {

struct ExperimentResult {
  Table table;
  std::int64_t relay_trials = 0;
  std::int64_t solver_failures = 0;
};

using Progress = std::function<void(const std::string&)>;

/// Closed-form curves over the SNR grid: single-user and interference
/// outage after L attempts for every L in retx_grid (or retx).
ExperimentResult run_analytic(const RunConfig& cfg, const Progress& progress = {});

/// Monte Carlo direct ARQ over the active sweep axis.
ExperimentResult run_simulate_direct(const RunConfig& cfg, const Progress& progress = {});

/// Monte Carlo shared-relay ARQ over the active sweep axis.
ExperimentResult run_simulate_relay(const RunConfig& cfg, const Progress& progress = {});

/// Columns SNR_dB,L,analytic,mc,ci.
ExperimentResult run_figure1(const RunConfig& cfg, const Progress& progress = {});
/// Columns R,series,p_hat,ci with series single-user, direct-ARQ, relay-ARQ.
ExperimentResult run_figure2(const RunConfig& cfg, const Progress& progress = {});
/// Columns M,series,p_hat,ci with series relay-ARQ and single-user.
ExperimentResult run_figure3(const RunConfig& cfg, const Progress& progress = {});

/// Dispatches on cfg.preset.
ExperimentResult run_experiment(const RunConfig& cfg, const Progress& progress = {});

}  // namespace relaynet
