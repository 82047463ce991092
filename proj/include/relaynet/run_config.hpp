#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaynet/channel.hpp"
#include "relaynet/relay_multi.hpp"

namespace relaynet {

/// Inclusive arithmetic range written as "start:stop:step" or a single value.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  static Grid parse(const std::string& text);
  static Grid single(double v) { return {v, v, 1.0}; }
  std::vector<double> values() const;
  std::string to_string() const;
  bool operator==(const Grid&) const = default;
};

enum class SweepAxis { snr_db, rate, m };

const char* axis_column(SweepAxis a);

/// Error in user-supplied configuration (flags or file).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Everything a CLI run depends on. Field names double as config-file keys.
struct RunConfig {
  // system
  int n = 3;
  int m = 3;
  double snr_db = 20.0;
  double noise_var = 1.0;
  double var_direct = 2.0;
  double var_cross = 1.0;
  double var_relay = 4.0;
  double rate = 2.0;
  int retx = 1;
  double relay_power_single_ratio = 1.0;  // Pr / P, single-user mode
  double relay_power_multi_ratio = 2.0;   // Pr / P, multiuser mode

  // run
  std::string preset;
  std::uint64_t seed = 1;
  std::int64_t trials = 10000;
  int threads = 0;
  std::optional<Grid> snr_db_grid;
  std::optional<Grid> rate_grid;
  std::optional<Grid> m_grid;
  std::vector<int> retx_grid;  // figure 1 curves
  std::string output;
  double bisection_eps = 1e-4;
  std::string formulation = "reduced";
  int sdp_max_newton_steps = 3000;

  /// Applies preset defaults (fig1 | fig2 | fig3). Unknown names throw.
  static RunConfig for_preset(const std::string& name);

  SystemConfig system() const;
  MultiOptions multi_options() const;

  /// The single active sweep axis, or nullopt when no grid is set. Throws
  /// ConfigError when more than one grid is set.
  std::optional<SweepAxis> sweep_axis() const;
  std::vector<double> sweep_values() const;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Applies "key = value" lines ('#' starts a comment) on top of cfg.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Full effective configuration in the same format; re-parses to an equal RunConfig.
std::string dump_config(const RunConfig& cfg);

/// System configuration at one point of the sweep.
SystemConfig system_at(const RunConfig& cfg, SweepAxis axis, double value);

}  // namespace relaynet
