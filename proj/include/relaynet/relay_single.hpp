#pragma once

#include "relaynet/channel.hpp"

namespace relaynet {

/// Relay beamformer for single-user retransmission.
struct Beamformer {
  ComplexMatrix b;              // M x N
  double power = 0.0;           // tr{B B^H}
  double null_residual = 0.0;   // ||B^H h_protect||
  double objective = 0.0;       // ||B^H h_target||^2
  bool target_nulled = false;   // h_target lies (numerically) in span(h_protect)
};

/// Maximises ||B^H h_target||^2 subject to B^H h_protect = 0 and
/// tr{B B^H} = relay_power. Works in the M-dimensional null space of
/// h_protect and returns a rank-1 B with all power in column 0.
Beamformer solve_single_user_beamformer(const ComplexVector& h_protect,
                                        const ComplexVector& h_target, double relay_power,
                                        int n_streams);

/// Same program solved literally on the vectorised MN-dimensional problem:
/// top eigenvector of V^H (I_N (x) h h^H) V with V = I_N (x) null_basis(h_protect).
/// Kept as a cross-check for the reduced solver.
Beamformer solve_single_user_beamformer_full(const ComplexVector& h_protect,
                                             const ComplexVector& h_target, double relay_power,
                                             int n_streams);

/// Rate of the user whose round-1 decoding succeeded while its BS sends a new
/// message and the relay serves the other user (relay signal is interference).
double rate_protected(const SystemConfig& cfg, const ChannelRealization& chan,
                      const ComplexMatrix& b, int protected_user);

/// Rate of the relay-served user; the other user's BS is the interferer.
double rate_target(const SystemConfig& cfg, const ChannelRealization& chan,
                   const ComplexMatrix& b, int target_user);

}  // namespace relaynet
