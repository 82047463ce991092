#include "doctest.h"
#include "relaynet/channel.hpp"

using namespace relaynet;

TEST_CASE("SystemConfig: threshold, SNR mapping and validation") {
  SystemConfig cfg;
  cfg.rate = 2.0;
  CHECK(cfg.sinr_threshold() == doctest::Approx(3.0));
  cfg.noise_var = 1e-3;
  cfg.set_snr_db(20.0);
  CHECK(cfg.bs_power == doctest::Approx(0.1));
  CHECK(cfg.relay_power_single == doctest::Approx(0.1));
  CHECK(cfg.relay_power_multi == doctest::Approx(0.2));
  CHECK(cfg.snr_db() == doctest::Approx(20.0));
  CHECK_NOTHROW(cfg.validate());

  SystemConfig bad = cfg;
  bad.n_bs_antennas = 0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  bad = cfg;
  bad.noise_var = -1.0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  bad = cfg;
  bad.rate = -0.5;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  bad = cfg;
  bad.retx_budget = 0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("draw_channels: shapes and determinism per (seed, trial)") {
  SystemConfig cfg;
  cfg.n_bs_antennas = 3;
  cfg.n_relay_antennas = 4;
  TrialRng a(42, 7);
  TrialRng b(42, 7);
  TrialRng c(42, 8);
  const ChannelRealization x = draw_channels(cfg, a);
  const ChannelRealization y = draw_channels(cfg, b);
  const ChannelRealization z = draw_channels(cfg, c);
  for (int i = 0; i < 2; ++i) {
    CHECK(x.relay[i].size() == 4);
    for (int j = 0; j < 2; ++j) {
      CHECK(x.bs[i][j].size() == 3);
      CHECK(x.bs[i][j] == y.bs[i][j]);
    }
    CHECK(x.relay[i] == y.relay[i]);
  }
  CHECK(x.bs[0][0] != z.bs[0][0]);
}

TEST_CASE("draw_channels: second moments and circular symmetry") {
  SystemConfig cfg;
  cfg.var_direct = 2.0;
  cfg.var_cross = 0.5;
  cfg.var_relay = 4.0;
  const int draws = 40000;
  double direct = 0.0, cross = 0.0, relay = 0.0;
  cplx square{0.0, 0.0};
  for (int t = 0; t < draws; ++t) {
    TrialRng rng(1, static_cast<std::uint64_t>(t));
    const ChannelRealization ch = draw_channels(cfg, rng);
    direct += ch.bs[0][0].squaredNorm() / 3.0;
    cross += ch.bs[0][1].squaredNorm() / 3.0;
    relay += ch.relay[1].squaredNorm() / 3.0;
    square += ch.bs[1][1](0) * ch.bs[1][1](0);
  }
  // E|h|^2 = sigma^2, per-sample std of |h|^2 equals sigma^2; 5-sigma bands.
  const double n = 3.0 * draws;
  CHECK(std::abs(direct / draws - 2.0) < 5.0 * 2.0 / std::sqrt(n));
  CHECK(std::abs(cross / draws - 0.5) < 5.0 * 0.5 / std::sqrt(n));
  CHECK(std::abs(relay / draws - 4.0) < 5.0 * 4.0 / std::sqrt(n));
  // E[h^2] = 0 with per-sample std sigma^2 = 2.
  CHECK(std::abs(square / static_cast<double>(draws)) < 5.0 * 2.0 / std::sqrt(double(draws)));
}

TEST_CASE("draw_channels: partial draws leave other links untouched") {
  SystemConfig cfg;
  TrialRng rng(3, 0);
  ChannelRealization ch;
  draw_bs_channels(cfg, rng, ch);
  CHECK(ch.relay[0].size() == 0);
  draw_relay_channels(cfg, rng, ch);
  CHECK(ch.relay[0].size() == cfg.n_relay_antennas);
}
