#include "relaynet/relay_single.hpp"

#include <cmath>

namespace relaynet {

namespace {

void check_inputs(const ComplexVector& h_protect, const ComplexVector& h_target,
                  double relay_power, int n_streams) {
  require_finite(h_protect, "single-user beamformer");
  require_finite(h_target, "single-user beamformer");
  if (h_protect.size() != h_target.size())
    throw ContractError("single-user beamformer: relay channel lengths differ");
  if (h_protect.size() < 2)
    throw DegenerateInput("single-user beamformer: M = 1 leaves no null space to transmit in");
  if (!(relay_power > 0.0)) throw ContractError("single-user beamformer: power must be positive");
  if (n_streams < 1) throw ContractError("single-user beamformer: N must be >= 1");
}

Beamformer finish(ComplexMatrix b, const ComplexVector& h_protect, const ComplexVector& h_target) {
  Beamformer out;
  out.power = b.squaredNorm();
  out.null_residual = (b.adjoint() * h_protect).norm();
  out.objective = (b.adjoint() * h_target).squaredNorm();
  out.b = std::move(b);
  return out;
}

// Relative size below which the projected target counts as fully nulled.
constexpr double kNulledTol = 1e-12;

}  // namespace

Beamformer solve_single_user_beamformer(const ComplexVector& h_protect,
                                        const ComplexVector& h_target, double relay_power,
                                        int n_streams) {
  check_inputs(h_protect, h_target, relay_power, n_streams);
  const Eigen::Index m = h_protect.size();
  const ComplexMatrix basis = null_basis(h_protect);

  // V^H (I (x) h h^H) V = I (x) (U^H h)(U^H h)^H, whose top eigenvector
  // within one block is U^H h / ||U^H h||.
  const ComplexVector coeffs = basis.adjoint() * h_target;
  const double coeff_norm = coeffs.norm();
  const bool nulled = coeff_norm <= kNulledTol * std::max(h_target.norm(), 1e-300);

  ComplexVector direction = nulled ? ComplexVector(basis.col(0)) : ComplexVector(basis * (coeffs / coeff_norm));
  ComplexMatrix b = ComplexMatrix::Zero(m, n_streams);
  b.col(0) = std::sqrt(relay_power) * direction;

  Beamformer out = finish(std::move(b), h_protect, h_target);
  out.target_nulled = nulled;
  return out;
}

Beamformer solve_single_user_beamformer_full(const ComplexVector& h_protect,
                                             const ComplexVector& h_target, double relay_power,
                                             int n_streams) {
  check_inputs(h_protect, h_target, relay_power, n_streams);
  const Eigen::Index m = h_protect.size();
  const ComplexMatrix v = kron_identity(n_streams, null_basis(h_protect));
  const ComplexMatrix gain = kron_identity(n_streams, h_target * h_target.adjoint());
  const ComplexMatrix reduced = v.adjoint() * gain * v;
  const HermitianEig eig = herm_eig(0.5 * (reduced + reduced.adjoint()));
  const ComplexVector b_vec = std::sqrt(relay_power) * (v * eig.vectors.col(0));

  Beamformer out = finish(unvec(b_vec, static_cast<int>(m), n_streams), h_protect, h_target);
  out.target_nulled = eig.values(0) <= kNulledTol * h_target.squaredNorm();
  return out;
}

double rate_protected(const SystemConfig& cfg, const ChannelRealization& chan,
                      const ComplexMatrix& b, int protected_user) {
  const int p = protected_user;
  const double signal = cfg.bs_power / cfg.n_bs_antennas * chan.bs[p][p].squaredNorm();
  const double relay_leak = (b.adjoint() * chan.relay[p]).squaredNorm();
  return std::log2(1.0 + signal / (relay_leak + cfg.noise_var));
}

double rate_target(const SystemConfig& cfg, const ChannelRealization& chan,
                   const ComplexMatrix& b, int target_user) {
  const int q = target_user;
  const int other = 1 - q;
  const double signal = (b.adjoint() * chan.relay[q]).squaredNorm();
  const double interference = cfg.bs_power / cfg.n_bs_antennas * chan.bs[q][other].squaredNorm();
  return std::log2(1.0 + signal / (interference + cfg.noise_var));
}

}  // namespace relaynet
