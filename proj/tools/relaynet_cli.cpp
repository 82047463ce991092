// relaynet: batch front end for the shared-relay ARQ library.
//
//   relaynet analytic        closed-form outage curves
//   relaynet simulate-direct Monte Carlo direct ARQ
//   relaynet simulate-relay  Monte Carlo shared-relay ARQ
//   relaynet beamform-single one single-user relay design
//   relaynet beamform-multi  one max-min SINR relay design
//   relaynet figure <1|2|3>  figure presets
//
// Exit codes: 0 success, 2 usage/config error, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "relaynet/experiment.hpp"
#include "relaynet/relay_multi.hpp"
#include "relaynet/relay_single.hpp"
#include "relaynet/run_config.hpp"

namespace {

using namespace relaynet;

constexpr int kUsageError = 2;
constexpr int kNumericError = 3;
constexpr double kFailureBudget = 1e-3;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
  std::optional<int> n;
  std::optional<std::string> m;
  std::optional<std::string> rate;
  std::optional<std::string> snr_db;
  std::optional<int> retx;
  std::optional<std::string> retx_grid;
  std::optional<std::string> formulation;
  std::optional<double> eps;
  std::optional<std::string> output;
  std::optional<std::string> dump_config;
};

// A value with ':' sets the sweep grid; a plain value sets the scalar and, if
// that axis is already being swept, collapses the sweep to that one point.
void apply_axis_flag(RunConfig& cfg, const std::string& key, const std::string& text) {
  const std::string grid_key = key + "_grid";
  if (text.find(':') != std::string::npos) {
    apply_config_entry(cfg, grid_key, text);
    return;
  }
  const bool swept = (key == "snr_db" && cfg.snr_db_grid) || (key == "rate" && cfg.rate_grid) ||
                     (key == "m" && cfg.m_grid);
  apply_config_entry(cfg, key, text);
  if (swept) apply_config_entry(cfg, grid_key, text);
}

RunConfig effective_config(const std::string& preset, const Flags& f) {
  RunConfig cfg = preset.empty() ? RunConfig{} : RunConfig::for_preset(preset);
  if (f.config) apply_config_file(cfg, *f.config);
  if (!preset.empty()) cfg.preset = preset;
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.threads) cfg.threads = *f.threads;
  if (f.n) cfg.n = *f.n;
  if (f.retx) cfg.retx = *f.retx;
  if (f.m) apply_axis_flag(cfg, "m", *f.m);
  if (f.rate) apply_axis_flag(cfg, "rate", *f.rate);
  if (f.snr_db) apply_axis_flag(cfg, "snr_db", *f.snr_db);
  if (f.retx_grid) apply_config_entry(cfg, "retx_grid", *f.retx_grid);
  if (f.formulation) cfg.formulation = *f.formulation;
  if (f.eps) cfg.bisection_eps = *f.eps;
  if (f.output) cfg.output = *f.output;
  cfg.validate();
  return cfg;
}

void emit(const RunConfig& cfg, const Table& table) {
  if (cfg.output.empty() || cfg.output == "-") {
    write_csv(std::cout, table);
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw ConfigError("cannot open output file '" + cfg.output + "'");
  write_csv(out, table);
}

Table beamform_single(const RunConfig& cfg) {
  const SystemConfig sys = cfg.system();
  TrialRng rng(cfg.seed, 0);
  const ChannelRealization ch = draw_channels(sys, rng);
  const bool full = cfg.formulation == "full";
  const Beamformer bf =
      full ? solve_single_user_beamformer_full(ch.relay[0], ch.relay[1], sys.relay_power_single,
                                               sys.n_bs_antennas)
           : solve_single_user_beamformer(ch.relay[0], ch.relay[1], sys.relay_power_single,
                                          sys.n_bs_antennas);
  const ComplexVector& hp = ch.relay[0];
  const ComplexVector& ht = ch.relay[1];
  const ComplexVector proj = ht - hp * (hp.adjoint() * ht)(0) / hp.squaredNorm();
  Table t;
  t.header = {"objective", "optimum", "power", "null_residual", "rate_protected", "rate_target"};
  t.add({bf.objective, sys.relay_power_single * proj.squaredNorm(), bf.power, bf.null_residual,
         rate_protected(sys, ch, bf.b, 0), rate_target(sys, ch, bf.b, 1)});
  return t;
}

Table beamform_multi(const RunConfig& cfg) {
  const SystemConfig sys = cfg.system();
  TrialRng rng(cfg.seed, 0);
  const ChannelRealization ch = draw_channels(sys, rng);
  const MultiBeamformer mb = max_min_sinr(ch.relay[0], ch.relay[1], sys.relay_power_multi,
                                          sys.noise_var, sys.n_bs_antennas, cfg.multi_options());
  Table t;
  t.header = {"t_star", "sinr1", "sinr2", "rank1", "rank2", "total_power", "bisection_steps"};
  t.add({mb.t_star, mb.achieved_sinr[0], mb.achieved_sinr[1], std::int64_t{mb.ranks[0]},
         std::int64_t{mb.ranks[1]}, mb.total_power, std::int64_t{mb.bisection_steps}});
  return t;
}

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--seed", f.seed, "64-bit random seed");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials per point (>= 100)");
  cmd->add_option("--threads", f.threads, "OpenMP threads (0 = runtime default)");
  cmd->add_option("--n", f.n, "BS antennas N");
  cmd->add_option("--m", f.m, "relay antennas M, or a:b:step sweep");
  cmd->add_option("--rate", f.rate, "rate R in bits/s/Hz, or a:b:step sweep");
  cmd->add_option("--snr-db", f.snr_db, "SNR P/sigma^2 in dB, or a:b:step sweep");
  cmd->add_option("--retx", f.retx, "total transmission attempts L");
  cmd->add_option("--retx-grid", f.retx_grid, "comma-separated L values (figure 1)");
  cmd->add_option("--formulation", f.formulation, "reduced | full");
  cmd->add_option("--eps", f.eps, "relative bisection tolerance");
  cmd->add_option("-o,--output", f.output, "CSV output path (default stdout)");
  cmd->add_option("--dump-config", f.dump_config, "write the effective config to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-relay ARQ outage analysis and relay beamforming"};
  app.require_subcommand(1);

  Flags flags;
  bool verbose = false;
  int figure = 0;
  std::string command;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common_flags(cmd, flags);
    cmd->add_flag("-v,--verbose", verbose, "progress on stderr");
    cmd->callback([&command, name] { command = name; });
    return cmd;
  };
  add("analytic", "closed-form outage curves");
  add("simulate-direct", "Monte Carlo direct ARQ");
  add("simulate-relay", "Monte Carlo shared-relay ARQ");
  add("beamform-single", "single-user relay beamformer for one channel draw");
  add("beamform-multi", "max-min SINR relay beamformers for one channel draw");
  CLI::App* fig = add("figure", "figure presets");
  fig->add_option("which", figure, "1, 2 or 3")->required()->check(CLI::Range(1, 3));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const Progress progress = [&](const std::string& msg) {
    if (verbose) std::fprintf(stderr, "[relaynet] %s\n", msg.c_str());
  };

  try {
    const std::string preset = command == "figure" ? "fig" + std::to_string(figure) : "";
    const RunConfig cfg = effective_config(preset, flags);
    if (flags.dump_config) {
      std::ofstream out(*flags.dump_config);
      if (!out) throw ConfigError("cannot open '" + *flags.dump_config + "'");
      out << dump_config(cfg);
    }

    ExperimentResult res;
    if (command == "analytic") res = run_analytic(cfg, progress);
    else if (command == "simulate-direct") res = run_simulate_direct(cfg, progress);
    else if (command == "simulate-relay") res = run_simulate_relay(cfg, progress);
    else if (command == "beamform-single") res.table = beamform_single(cfg);
    else if (command == "beamform-multi") res.table = beamform_multi(cfg);
    else res = run_experiment(cfg, progress);

    emit(cfg, res.table);
    if (res.relay_trials > 0 &&
        static_cast<double>(res.solver_failures) > kFailureBudget * static_cast<double>(res.relay_trials)) {
      std::fprintf(stderr, "relaynet: %lld of %lld relay trials hit solver failures\n",
                   static_cast<long long>(res.solver_failures),
                   static_cast<long long>(res.relay_trials));
      return kNumericError;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "relaynet: %s\n", e.what());
    return kUsageError;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "relaynet: %s\n", e.what());
    return kUsageError;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "relaynet: numeric failure: %s\n", e.what());
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "relaynet: %s\n", e.what());
    return kUsageError;
  }
}
