#pragma once

#include <string>
#include <vector>

#include "relaynet/linalg.hpp"

namespace relaynet {

/// Relaxed two-user SINR feasibility problem at a fixed target t:
///
///   tr{C_1 X_1} - t tr{C_1 X_2} - t sigma^2 >= 0
///   tr{C_2 X_2} - t tr{C_2 X_1} - t sigma^2 >= 0
///   tr{X_1} + tr{X_2} <= Pr,   X_1, X_2 PSD.
struct SdpInstance {
  ComplexMatrix c1;
  ComplexMatrix c2;
  double target = 0.0;
  double noise_var = 1.0;
  double power_budget = 1.0;

  Eigen::Index dim() const { return c1.rows(); }
  void validate() const;
};

enum class SdpStatus { feasible, infeasible, numeric_failure };

const char* to_string(SdpStatus s);

struct SdpOptions {
  /// Stop once the barrier duality bound nu * mu falls below this.
  double tol = 1e-8;
  /// Feasible iff the normalised slack is at least -margin.
  double feasibility_margin = 1e-9;
  /// Return as soon as the sign of the optimal slack is certain.
  bool early_exit = true;
  int max_newton_steps = 3000;
  bool verbose = false;
};

struct SdpIterate {
  double mu = 0.0;
  double slack = 0.0;        // slack of the current iterate (lower bound on s*)
  double slack_bound = 0.0;  // upper bound on s* from the barrier duality gap
  int newton_steps = 0;
};

/// Result of solve_feasibility. Slacks are normalised by Pr * c * (1 + t),
/// with c = max(||C_1||_F, ||C_2||_F), so they are comparable across SNRs.
struct SdpOutcome {
  SdpStatus status = SdpStatus::numeric_failure;
  ComplexMatrix x1;  // present iff feasible
  ComplexMatrix x2;
  double slack = 0.0;
  double slack_bound = 0.0;
  std::vector<SdpIterate> trace;
  std::string message;
};

/// Raw SINR constraint value tr{C_i X_i} - t tr{C_i X_j} - t sigma^2 for user
/// index i in {0, 1}.
double sinr_gap(const SdpInstance& inst, const ComplexMatrix& x1, const ComplexMatrix& x2,
                int user);

/// Normalisation used for all reported slacks.
double slack_scale(const SdpInstance& inst);

/// min over users of sinr_gap / slack_scale.
double certificate_slack(const SdpInstance& inst, const ComplexMatrix& x1,
                         const ComplexMatrix& x2);

/// Phase-I max-slack SDP solved by a primal log-barrier method with Newton
/// steps on Hermitian variables.
SdpOutcome solve_feasibility(const SdpInstance& inst, const SdpOptions& opts = {});

}  // namespace relaynet
