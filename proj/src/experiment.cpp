#include "relaynet/experiment.hpp"

#include <sstream>

#include "relaynet/outage.hpp"
#include "relaynet/sim.hpp"

namespace relaynet {

namespace {

void report(const Progress& progress, const std::string& msg) {
  if (progress) progress(msg);
}

std::string point_label(SweepAxis axis, double x) {
  return std::string(axis_column(axis)) + "=" + format_double(x);
}

// Interference outage for one attempt: closed form when N = 3, characteristic
// function inversion otherwise.
double interference_outage(const SystemConfig& sys) {
  return sys.n_bs_antennas == 3 ? outage_interference_n3(sys) : cf_inversion_outage(sys);
}

struct Sweep {
  SweepAxis axis;
  std::vector<double> values;
};

Sweep sweep_or_default(const RunConfig& cfg, SweepAxis fallback, double fallback_value) {
  const auto axis = cfg.sweep_axis();
  if (axis) return {*axis, cfg.sweep_values()};
  return {fallback, {fallback_value}};
}

std::vector<int> attempts_list(const RunConfig& cfg) {
  return cfg.retx_grid.empty() ? std::vector<int>{cfg.retx} : cfg.retx_grid;
}

}  // namespace

ExperimentResult run_analytic(const RunConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Sweep sw = sweep_or_default(cfg, SweepAxis::snr_db, cfg.snr_db);
  ExperimentResult res;
  res.table.header = {axis_column(sw.axis), "L", "single_user", "interference"};
  for (double x : sw.values) {
    const SystemConfig sys = system_at(cfg, sw.axis, x);
    const double su = outage_single_user(sys);
    const double intf = interference_outage(sys);
    for (int l : attempts_list(cfg))
      res.table.add({x, std::int64_t{l}, arq_outage(su, l), arq_outage(intf, l)});
    report(progress, "analytic " + point_label(sw.axis, x));
  }
  return res;
}

ExperimentResult run_simulate_direct(const RunConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Sweep sw = sweep_or_default(cfg, SweepAxis::snr_db, cfg.snr_db);
  ExperimentResult res;
  res.table.header = {axis_column(sw.axis), "L", "p_hat", "ci", "p_user1", "p_user2", "trials"};
  for (double x : sw.values) {
    const SystemConfig sys = system_at(cfg, sw.axis, x);
    const DirectResult r = simulate_direct(sys, cfg.trials, cfg.seed, cfg.threads);
    res.table.add({x, std::int64_t{sys.retx_budget}, r.pooled.p_hat(), r.pooled.ci_halfwidth(),
                   r.user[0].p_hat(), r.user[1].p_hat(), std::int64_t{cfg.trials}});
    report(progress, "simulate-direct " + point_label(sw.axis, x));
  }
  return res;
}

ExperimentResult run_simulate_relay(const RunConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Sweep sw = sweep_or_default(cfg, SweepAxis::snr_db, cfg.snr_db);
  ExperimentResult res;
  res.table.header = {axis_column(sw.axis), "p_hat",          "ci",
                      "p_user1",            "p_user2",        "trials",
                      "single_user_mode",   "multiuser_mode", "solver_failures"};
  const MultiOptions opts = cfg.multi_options();
  for (double x : sw.values) {
    const SystemConfig sys = system_at(cfg, sw.axis, x);
    const RelayResult r = simulate_relay(sys, cfg.trials, cfg.seed, opts, cfg.threads);
    res.relay_trials += cfg.trials;
    res.solver_failures += r.solver_failures;
    res.table.add({x, r.pooled.p_hat(), r.pooled.ci_halfwidth(), r.user[0].p_hat(),
                   r.user[1].p_hat(), r.user[0].trials,
                   r.mode_counts[static_cast<std::size_t>(RelayMode::single_user)],
                   r.mode_counts[static_cast<std::size_t>(RelayMode::multiuser)], r.solver_failures});
    report(progress, "simulate-relay " + point_label(sw.axis, x));
  }
  return res;
}

ExperimentResult run_figure1(const RunConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Sweep sw = sweep_or_default(cfg, SweepAxis::snr_db, cfg.snr_db);
  if (sw.axis != SweepAxis::snr_db) throw ConfigError("figure 1 sweeps SNR only");
  ExperimentResult res;
  res.table.header = {"SNR_dB", "L", "analytic", "mc", "ci"};
  for (double x : sw.values) {
    SystemConfig sys = system_at(cfg, sw.axis, x);
    const double p1 = interference_outage(sys);
    for (int l : attempts_list(cfg)) {
      sys.retx_budget = l;
      const DirectResult r = simulate_direct(sys, cfg.trials, cfg.seed, cfg.threads);
      res.table.add({x, std::int64_t{l}, arq_outage(p1, l), r.pooled.p_hat(),
                     r.pooled.ci_halfwidth()});
    }
    report(progress, "figure 1 " + point_label(sw.axis, x));
  }
  return res;
}

namespace {

void add_relay_rows(ExperimentResult& res, const RunConfig& cfg, SweepAxis axis, double x,
                    bool with_direct) {
  const SystemConfig sys = system_at(cfg, axis, x);
  const double su = arq_outage(outage_single_user(sys), sys.retx_budget);
  res.table.add({x, std::string("single-user"), su, 0.0});
  if (with_direct) {
    const DirectResult d = simulate_direct(sys, cfg.trials, cfg.seed, cfg.threads);
    res.table.add({x, std::string("direct-ARQ"), d.pooled.p_hat(), d.pooled.ci_halfwidth()});
  }
  const RelayResult r = simulate_relay(sys, cfg.trials, cfg.seed, cfg.multi_options(), cfg.threads);
  res.relay_trials += cfg.trials;
  res.solver_failures += r.solver_failures;
  res.table.add({x, std::string("relay-ARQ"), r.pooled.p_hat(), r.pooled.ci_halfwidth()});
}

}  // namespace

ExperimentResult run_figure2(const RunConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Sweep sw = sweep_or_default(cfg, SweepAxis::rate, cfg.rate);
  if (sw.axis != SweepAxis::rate) throw ConfigError("figure 2 sweeps the rate only");
  ExperimentResult res;
  res.table.header = {"R", "series", "p_hat", "ci"};
  for (double x : sw.values) {
    add_relay_rows(res, cfg, sw.axis, x, true);
    report(progress, "figure 2 " + point_label(sw.axis, x));
  }
  return res;
}

ExperimentResult run_figure3(const RunConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Sweep sw = sweep_or_default(cfg, SweepAxis::m, cfg.m);
  if (sw.axis != SweepAxis::m) throw ConfigError("figure 3 sweeps M only");
  ExperimentResult res;
  res.table.header = {"M", "series", "p_hat", "ci"};
  for (double x : sw.values) {
    add_relay_rows(res, cfg, sw.axis, x, false);
    report(progress, "figure 3 " + point_label(sw.axis, x));
  }
  return res;
}

ExperimentResult run_experiment(const RunConfig& cfg, const Progress& progress) {
  if (cfg.preset == "fig1") return run_figure1(cfg, progress);
  if (cfg.preset == "fig2") return run_figure2(cfg, progress);
  if (cfg.preset == "fig3") return run_figure3(cfg, progress);
  throw ConfigError("unknown preset '" + cfg.preset + "'");
}

}  // namespace relaynet
