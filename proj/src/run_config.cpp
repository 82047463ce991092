#include "relaynet/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "relaynet/csv.hpp"

namespace relaynet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_int<int>(key, item));
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n", [](RunConfig& c, auto& k, auto& v) { c.n = parse_int<int>(k, v); }},
      {"m", [](RunConfig& c, auto& k, auto& v) { c.m = parse_int<int>(k, v); }},
      {"snr_db", [](RunConfig& c, auto& k, auto& v) { c.snr_db = parse_double(k, v); }},
      {"noise_var", [](RunConfig& c, auto& k, auto& v) { c.noise_var = parse_double(k, v); }},
      {"var_direct", [](RunConfig& c, auto& k, auto& v) { c.var_direct = parse_double(k, v); }},
      {"var_cross", [](RunConfig& c, auto& k, auto& v) { c.var_cross = parse_double(k, v); }},
      {"var_relay", [](RunConfig& c, auto& k, auto& v) { c.var_relay = parse_double(k, v); }},
      {"rate", [](RunConfig& c, auto& k, auto& v) { c.rate = parse_double(k, v); }},
      {"retx", [](RunConfig& c, auto& k, auto& v) { c.retx = parse_int<int>(k, v); }},
      {"relay_power_single_ratio",
       [](RunConfig& c, auto& k, auto& v) { c.relay_power_single_ratio = parse_double(k, v); }},
      {"relay_power_multi_ratio",
       [](RunConfig& c, auto& k, auto& v) { c.relay_power_multi_ratio = parse_double(k, v); }},
      {"preset", [](RunConfig& c, auto&, auto& v) { c.preset = trim(v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.seed = parse_int<std::uint64_t>(k, v); }},
      {"trials", [](RunConfig& c, auto& k, auto& v) { c.trials = parse_int<std::int64_t>(k, v); }},
      {"threads", [](RunConfig& c, auto& k, auto& v) { c.threads = parse_int<int>(k, v); }},
      {"snr_db_grid",
       [](RunConfig& c, auto&, auto& v) {
         c.snr_db_grid = trim(v).empty() ? std::nullopt : std::optional(Grid::parse(v));
       }},
      {"rate_grid",
       [](RunConfig& c, auto&, auto& v) {
         c.rate_grid = trim(v).empty() ? std::nullopt : std::optional(Grid::parse(v));
       }},
      {"m_grid",
       [](RunConfig& c, auto&, auto& v) {
         c.m_grid = trim(v).empty() ? std::nullopt : std::optional(Grid::parse(v));
       }},
      {"retx_grid", [](RunConfig& c, auto& k, auto& v) { c.retx_grid = parse_int_list(k, v); }},
      {"output", [](RunConfig& c, auto&, auto& v) { c.output = trim(v); }},
      {"bisection_eps",
       [](RunConfig& c, auto& k, auto& v) { c.bisection_eps = parse_double(k, v); }},
      {"formulation", [](RunConfig& c, auto&, auto& v) { c.formulation = trim(v); }},
      {"sdp_max_newton_steps",
       [](RunConfig& c, auto& k, auto& v) { c.sdp_max_newton_steps = parse_int<int>(k, v); }},
  };
  return table;
}

}  // namespace

Grid Grid::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  Grid g;
  if (parts.size() == 1) {
    g.start = g.stop = parse_double("grid", parts[0]);
  } else if (parts.size() == 3) {
    g.start = parse_double("grid", parts[0]);
    g.stop = parse_double("grid", parts[1]);
    g.step = parse_double("grid", parts[2]);
  } else {
    throw ConfigError("grid must be 'value' or 'start:stop:step', got '" + text + "'");
  }
  if (!(g.step > 0.0)) throw ConfigError("grid step must be positive in '" + text + "'");
  if (g.stop < g.start) throw ConfigError("grid stop below start in '" + text + "'");
  return g;
}

std::vector<double> Grid::values() const {
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  return out;
}

std::string Grid::to_string() const {
  if (start == stop) return format_double(start);
  return format_double(start) + ":" + format_double(stop) + ":" + format_double(step);
}

const char* axis_column(SweepAxis a) {
  switch (a) {
    case SweepAxis::snr_db: return "SNR_dB";
    case SweepAxis::rate: return "R";
    case SweepAxis::m: return "M";
  }
  return "?";
}

RunConfig RunConfig::for_preset(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "fig1") {
    c.n = 3;
    c.noise_var = 1e-3;
    c.var_direct = 2.0;
    c.var_cross = 1.0;
    c.rate = 2.0;
    c.snr_db_grid = Grid{0.0, 40.0, 5.0};
    c.retx_grid = {1, 2, 5, 10};
  } else if (name == "fig2") {
    c.m = 3;
    c.retx = 2;
    c.snr_db = 35.0;
    c.rate_grid = Grid{2.0, 8.0, 1.0};
  } else if (name == "fig3") {
    c.rate = 6.0;
    c.retx = 2;
    c.snr_db = 10.0;
    c.m_grid = Grid{2.0, 6.0, 1.0};
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
  }
  return c;
}

SystemConfig RunConfig::system() const {
  SystemConfig s;
  s.n_bs_antennas = n;
  s.n_relay_antennas = m;
  s.noise_var = noise_var;
  s.var_direct = var_direct;
  s.var_cross = var_cross;
  s.var_relay = var_relay;
  s.rate = rate;
  s.retx_budget = retx;
  s.set_snr_db(snr_db);
  s.relay_power_single = relay_power_single_ratio * s.bs_power;
  s.relay_power_multi = relay_power_multi_ratio * s.bs_power;
  return s;
}

MultiOptions RunConfig::multi_options() const {
  MultiOptions o;
  o.eps_rel = bisection_eps;
  o.formulation = formulation == "full" ? Formulation::full : Formulation::reduced;
  o.sdp.max_newton_steps = sdp_max_newton_steps;
  return o;
}

std::optional<SweepAxis> RunConfig::sweep_axis() const {
  const int active = int(snr_db_grid.has_value()) + int(rate_grid.has_value()) + int(m_grid.has_value());
  if (active > 1) throw ConfigError("only one of snr_db_grid, rate_grid, m_grid may be set");
  if (snr_db_grid) return SweepAxis::snr_db;
  if (rate_grid) return SweepAxis::rate;
  if (m_grid) return SweepAxis::m;
  return std::nullopt;
}

std::vector<double> RunConfig::sweep_values() const {
  const auto axis = sweep_axis();
  if (!axis) return {};
  switch (*axis) {
    case SweepAxis::snr_db: return snr_db_grid->values();
    case SweepAxis::rate: return rate_grid->values();
    case SweepAxis::m: return m_grid->values();
  }
  return {};
}

void RunConfig::validate() const {
  sweep_axis();
  if (trials < 100) throw ConfigError("trials must be >= 100");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!(bisection_eps > 0.0) || bisection_eps >= 1.0)
    throw ConfigError("bisection_eps must lie in (0, 1)");
  if (formulation != "reduced" && formulation != "full")
    throw ConfigError("formulation must be 'reduced' or 'full'");
  if (sdp_max_newton_steps < 1) throw ConfigError("sdp_max_newton_steps must be >= 1");
  for (int l : retx_grid)
    if (l < 1) throw ConfigError("retx_grid entries must be >= 1");
  if (!(relay_power_single_ratio > 0.0) || !(relay_power_multi_ratio > 0.0))
    throw ConfigError("relay power ratios must be positive");
  try {
    system().validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(trim(key));
  if (it == setters().end()) throw ConfigError("unknown config key '" + trim(key) + "'");
  it->second(cfg, trim(key), value);
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  auto grid = [](const std::optional<Grid>& g) { return g ? g->to_string() : std::string{}; };
  os << "n = " << c.n << '\n'
     << "m = " << c.m << '\n'
     << "snr_db = " << format_double(c.snr_db) << '\n'
     << "noise_var = " << format_double(c.noise_var) << '\n'
     << "var_direct = " << format_double(c.var_direct) << '\n'
     << "var_cross = " << format_double(c.var_cross) << '\n'
     << "var_relay = " << format_double(c.var_relay) << '\n'
     << "rate = " << format_double(c.rate) << '\n'
     << "retx = " << c.retx << '\n'
     << "relay_power_single_ratio = " << format_double(c.relay_power_single_ratio) << '\n'
     << "relay_power_multi_ratio = " << format_double(c.relay_power_multi_ratio) << '\n'
     << "preset = " << c.preset << '\n'
     << "seed = " << c.seed << '\n'
     << "trials = " << c.trials << '\n'
     << "threads = " << c.threads << '\n'
     << "snr_db_grid = " << grid(c.snr_db_grid) << '\n'
     << "rate_grid = " << grid(c.rate_grid) << '\n'
     << "m_grid = " << grid(c.m_grid) << '\n'
     << "retx_grid = " << join_ints(c.retx_grid) << '\n'
     << "output = " << c.output << '\n'
     << "bisection_eps = " << format_double(c.bisection_eps) << '\n'
     << "formulation = " << c.formulation << '\n'
     << "sdp_max_newton_steps = " << c.sdp_max_newton_steps << '\n';
  return os.str();
}

SystemConfig system_at(const RunConfig& cfg, SweepAxis axis, double value) {
  RunConfig point = cfg;
  switch (axis) {
    case SweepAxis::snr_db: point.snr_db = value; break;
    case SweepAxis::rate: point.rate = value; break;
    case SweepAxis::m: point.m = static_cast<int>(std::lround(value)); break;
  }
  return point.system();
}

}  // namespace relaynet
