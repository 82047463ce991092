#pragma once

#include <array>
#include <optional>

#include "relaynet/sdp.hpp"

namespace relaynet {

/// Pair of relay beamformers for multiuser retransmission.
struct MultiBeamformer {
  ComplexMatrix b1;  // M x N
  ComplexMatrix b2;
  double t_star = 0.0;                 // largest SINR target certified feasible
  std::array<double, 2> achieved_sinr{};
  double total_power = 0.0;
  std::array<int, 2> ranks{};          // ranks after purification
  std::array<double, 2> eig_ratio{};   // lambda_2 / lambda_1 of each purified Z_i
  int bisection_steps = 0;
  int purification_steps = 0;
  bool zero_forced = false;            // beams replaced by their projections off the other channel
  double upper_bound = 0.0;            // final b_u
};

enum class Formulation {
  reduced,  // M x M variables (sum of the diagonal blocks of the MN x MN problem)
  full,     // MN x MN variables, C_i = I_N (x) h_i h_i^H
};

struct MultiOptions {
  /// Bisection stops when b_u - b_l <= eps_rel * initial b_u.
  double eps_rel = 1e-4;
  /// Absolute bisection tolerance; overrides eps_rel when positive.
  double eps_abs = 0.0;
  Formulation formulation = Formulation::reduced;
  SdpOptions sdp{};
};

/// Raised when the SDP solver fails twice at one bisection target. Carries
/// the bracket reached so far.
class BisectionFailure : public NumericError {
 public:
  BisectionFailure(const std::string& what, double lower, double upper)
      : NumericError(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Result of rank purification.
struct RankReduction {
  ComplexMatrix z1;
  ComplexMatrix z2;
  std::array<int, 2> ranks{};
  int iterations = 0;
};

/// Eigenvalues above this fraction of the largest count toward the rank.
inline constexpr double kRankTol = 1e-9;

/// Builds the feasibility instance for channels h1, h2 at target t.
SdpInstance make_instance(const ComplexVector& h1, const ComplexVector& h2, double relay_power,
                          double noise_var, double target, Formulation form, int n_streams);

/// Collapses an instance with C_i = I_n (x) A_i to the equivalent one on A_i.
/// Constraint values depend on X only through block_diagonal_sum(X, n).
SdpInstance reduce_dimension(const SdpInstance& full, int n_blocks);

/// Turns any feasible pair into a rank-one pair with the same SINR gaps and
/// total power, by repeatedly moving along a null direction of the three
/// linear constraint functionals until one eigenvalue vanishes.
RankReduction rank_reduce(const ComplexMatrix& x1, const ComplexMatrix& x2,
                          const SdpInstance& inst);

/// Beamformer from a rank-one Z. If Z is M x M the vector goes into column 0
/// of an M x n_streams matrix; if Z is MN x MN it is unvec'd. Throws
/// NumericError when Z is not rank one within 1e-6.
ComplexMatrix extract_beamformer(const ComplexMatrix& z, int m, int n_streams);

/// SINR of user i (0 or 1) for beamformers B_1, B_2.
double multiuser_sinr(const ComplexVector& h, const ComplexMatrix& own, const ComplexMatrix& other,
                      double noise_var);

/// Max-min SINR relay beamforming by bisection over relaxed feasibility
/// problems, followed by rank-one purification.
MultiBeamformer max_min_sinr(const ComplexVector& h1, const ComplexVector& h2,
                             double relay_power, double noise_var, int n_streams,
                             const MultiOptions& opts = {});

/// Single feasibility test at SINR target `target`. Returns purified
/// beamformers meeting the target, or nullopt when the target is certified
/// unreachable. Throws BisectionFailure when the solver fails twice.
std::optional<MultiBeamformer> beamform_for_target(const ComplexVector& h1,
                                                   const ComplexVector& h2, double relay_power,
                                                   double noise_var, int n_streams, double target,
                                                   const MultiOptions& opts = {});

}  // namespace relaynet
