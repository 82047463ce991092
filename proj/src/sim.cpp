#include "relaynet/sim.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "relaynet/relay_single.hpp"

namespace relaynet {

double OutageEstimate::p_hat() const {
  return trials > 0 ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
}

double OutageEstimate::ci_halfwidth() const {
  if (trials <= 0) return 0.0;
  const double p = p_hat();
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

OutageEstimate& OutageEstimate::operator+=(const OutageEstimate& other) {
  trials += other.trials;
  failures += other.failures;
  return *this;
}

const char* to_string(RelayMode m) {
  switch (m) {
    case RelayMode::none: return "none";
    case RelayMode::single_user: return "single-user";
    case RelayMode::multiuser: return "multiuser";
  }
  return "?";
}

namespace {

// Relative slack on the multiuser SINR check; covers rounding in the
// purification of a solution certified at the target.
constexpr double kSinrRelTol = 1e-9;

// SINR of user i when both BSs transmit.
double direct_sinr(const SystemConfig& cfg, const ChannelRealization& ch, int i) {
  const double scale = cfg.bs_power / cfg.n_bs_antennas;
  return scale * ch.bs[i][i].squaredNorm() /
         (scale * ch.bs[i][1 - i].squaredNorm() + cfg.noise_var);
}

}  // namespace

TrialOutcome direct_trial(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t index) {
  TrialRng rng(seed, index);
  const double gamma = cfg.sinr_threshold();
  TrialOutcome out;
  ChannelRealization ch;
  std::array<bool, 2> done{};
  for (int attempt = 0; attempt < cfg.retx_budget; ++attempt) {
    draw_bs_channels(cfg, rng, ch);
    for (int i = 0; i < 2; ++i) {
      const bool ok = direct_sinr(cfg, ch, i) >= gamma;
      if (attempt == 0) out.failed_round1[i] = !ok;
      done[i] = done[i] || ok;
    }
  }
  out.final_success = done;
  return out;
}

TrialOutcome relay_trial(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t index,
                         const MultiOptions& opts) {
  TrialRng rng(seed, index);
  const double gamma = cfg.sinr_threshold();
  TrialOutcome out;
  ChannelRealization ch;
  draw_bs_channels(cfg, rng, ch);
  for (int i = 0; i < 2; ++i) {
    out.failed_round1[i] = direct_sinr(cfg, ch, i) < gamma;
    out.final_success[i] = !out.failed_round1[i];
  }

  const int failed = static_cast<int>(out.failed_round1[0]) + static_cast<int>(out.failed_round1[1]);
  if (failed == 0) return out;

  if (failed == 1) {
    out.mode = RelayMode::single_user;
    const int target = out.failed_round1[0] ? 0 : 1;
    const int protect = 1 - target;
    // Round 2: BS `protect` sends a fresh message, the failed user's BS is silent.
    draw_bs_channels(cfg, rng, ch);
    draw_relay_channels(cfg, rng, ch);
    const Beamformer bf = solve_single_user_beamformer(
        ch.relay[protect], ch.relay[target], cfg.relay_power_single, cfg.n_bs_antennas);
    out.final_success[target] = rate_target(cfg, ch, bf.b, target) >= cfg.rate;
    return out;
  }

  out.mode = RelayMode::multiuser;
  draw_relay_channels(cfg, rng, ch);
  try {
    const auto mb = beamform_for_target(ch.relay[0], ch.relay[1], cfg.relay_power_multi,
                                        cfg.noise_var, cfg.n_bs_antennas, gamma, opts);
    if (mb) {
      for (int i = 0; i < 2; ++i)
        out.final_success[i] = mb->achieved_sinr[i] >= gamma * (1.0 - kSinrRelTol);
    }
  } catch (const NumericError&) {
    out.solver_failed = true;
  }
  return out;
}

namespace {

void tally(const TrialOutcome& t, std::array<OutageEstimate, 2>& user) {
  for (int i = 0; i < 2; ++i) {
    ++user[i].trials;
    if (!t.final_success[i]) ++user[i].failures;
  }
}

DirectResult reduce_direct(const std::vector<TrialOutcome>& outcomes) {
  DirectResult r;
  for (const auto& t : outcomes) tally(t, r.user);
  r.pooled = r.user[0];
  r.pooled += r.user[1];
  return r;
}

RelayResult reduce_relay(const std::vector<TrialOutcome>& outcomes) {
  RelayResult r;
  for (const auto& t : outcomes) {
    if (t.solver_failed) {
      ++r.solver_failures;
      continue;
    }
    ++r.mode_counts[static_cast<std::size_t>(t.mode)];
    tally(t, r.user);
  }
  r.pooled = r.user[0];
  r.pooled += r.user[1];
  return r;
}

template <class Trial>
std::vector<TrialOutcome> run_parallel(std::int64_t trials, int threads, Trial&& trial) {
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
#ifdef _OPENMP
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(nthreads)
#else
  (void)threads;
#endif
  for (std::int64_t k = 0; k < trials; ++k)
    outcomes[static_cast<std::size_t>(k)] = trial(static_cast<std::uint64_t>(k));
  return outcomes;
}

template <class Trial>
std::vector<TrialOutcome> run_serial(std::int64_t trials, Trial&& trial) {
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t k = 0; k < trials; ++k) outcomes.push_back(trial(static_cast<std::uint64_t>(k)));
  return outcomes;
}

void check_run(const SystemConfig& cfg, std::int64_t trials) {
  cfg.validate();
  if (trials < 1) throw ContractError("simulation needs at least one trial");
}

void check_relay(const SystemConfig& cfg) {
  if (cfg.n_relay_antennas < 2)
    throw ContractError("relay simulation needs at least two relay antennas");
}

}  // namespace

DirectResult simulate_direct(const SystemConfig& cfg, std::int64_t trials, std::uint64_t seed,
                             int threads) {
  check_run(cfg, trials);
  return reduce_direct(
      run_parallel(trials, threads, [&](std::uint64_t k) { return direct_trial(cfg, seed, k); }));
}

DirectResult simulate_direct_serial(const SystemConfig& cfg, std::int64_t trials,
                                    std::uint64_t seed) {
  check_run(cfg, trials);
  return reduce_direct(run_serial(trials, [&](std::uint64_t k) { return direct_trial(cfg, seed, k); }));
}

RelayResult simulate_relay(const SystemConfig& cfg, std::int64_t trials, std::uint64_t seed,
                           const MultiOptions& opts, int threads) {
  check_run(cfg, trials);
  check_relay(cfg);
  return reduce_relay(run_parallel(
      trials, threads, [&](std::uint64_t k) { return relay_trial(cfg, seed, k, opts); }));
}

RelayResult simulate_relay_serial(const SystemConfig& cfg, std::int64_t trials,
                                  std::uint64_t seed, const MultiOptions& opts) {
  check_run(cfg, trials);
  check_relay(cfg);
  return reduce_relay(
      run_serial(trials, [&](std::uint64_t k) { return relay_trial(cfg, seed, k, opts); }));
}

}  // namespace relaynet
