#include "relaynet/sdp.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace relaynet {

void SdpInstance::validate() const {
  if (c1.rows() == 0 || c1.rows() != c1.cols() || c2.rows() != c1.rows() || c2.cols() != c1.cols())
    throw ContractError("SdpInstance: C_1 and C_2 must be square and of equal size");
  require_finite(c1, "SdpInstance C_1");
  require_finite(c2, "SdpInstance C_2");
  if (!is_hermitian(c1, 1e-10) || !is_hermitian(c2, 1e-10))
    throw ContractError("SdpInstance: C_i must be Hermitian");
  if (!(target >= 0.0) || !std::isfinite(target)) throw ContractError("SdpInstance: t must be >= 0");
  if (!(power_budget > 0.0)) throw ContractError("SdpInstance: power budget must be positive");
  if (!(noise_var > 0.0)) throw ContractError("SdpInstance: noise variance must be positive");
  if (c1.norm() == 0.0 || c2.norm() == 0.0) throw DegenerateInput("SdpInstance: zero channel");
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::feasible: return "feasible";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::numeric_failure: return "numeric-failure";
  }
  return "?";
}

double sinr_gap(const SdpInstance& inst, const ComplexMatrix& x1, const ComplexMatrix& x2,
                int user) {
  const ComplexMatrix& c = user == 0 ? inst.c1 : inst.c2;
  const ComplexMatrix& own = user == 0 ? x1 : x2;
  const ComplexMatrix& other = user == 0 ? x2 : x1;
  return trace_product(c, own) - inst.target * trace_product(c, other) -
         inst.target * inst.noise_var;
}

double slack_scale(const SdpInstance& inst) {
  const double c = std::max(inst.c1.norm(), inst.c2.norm());
  return inst.power_budget * c * (1.0 + inst.target);
}

double certificate_slack(const SdpInstance& inst, const ComplexMatrix& x1,
                         const ComplexMatrix& x2) {
  const double scale = slack_scale(inst);
  return std::min(sinr_gap(inst, x1, x2, 0), sinr_gap(inst, x1, x2, 1)) / scale;
}

namespace {

// Variables in normalised units: X_i = Pr * Y_i, C_i = c * Chat_i. Constraints
// g_0, g_1 are the SINR gaps divided by Pr c (1 + t) minus the slack s; g_2 is
// the power budget 1 - tr Y_1 - tr Y_2.
struct Problem {
  std::array<ComplexMatrix, 2> chat;
  double t = 0.0;
  double rho = 0.0;  // sigma^2 / (Pr c)
  Eigen::Index dim = 0;

  // Coefficient of Y_j in constraint k (k = 0, 1 are SINR rows).
  std::array<std::array<ComplexMatrix, 2>, 3> coef;
  std::array<double, 3> slack_coef{-1.0, -1.0, 0.0};
  std::array<double, 3> offset{};
};

Problem make_problem(const SdpInstance& inst) {
  Problem pb;
  const double c = std::max(inst.c1.norm(), inst.c2.norm());
  pb.chat = {inst.c1 / c, inst.c2 / c};
  for (auto& m : pb.chat) m = 0.5 * (m + m.adjoint()).eval();
  pb.t = inst.target;
  pb.rho = inst.noise_var / (inst.power_budget * c);
  pb.dim = inst.dim();
  const double w = 1.0 / (1.0 + pb.t);
  pb.coef[0] = {w * pb.chat[0], -pb.t * w * pb.chat[0]};
  pb.coef[1] = {-pb.t * w * pb.chat[1], w * pb.chat[1]};
  const ComplexMatrix eye = ComplexMatrix::Identity(pb.dim, pb.dim);
  pb.coef[2] = {-eye, -eye};
  pb.offset = {-pb.t * pb.rho * w, -pb.t * pb.rho * w, 1.0};
  return pb;
}

struct Point {
  std::array<ComplexMatrix, 2> y;
  double s = 0.0;
};

std::array<double, 3> constraints(const Problem& pb, const Point& z) {
  std::array<double, 3> g{};
  for (int k = 0; k < 3; ++k)
    g[k] = trace_product(pb.coef[k][0], z.y[0]) + trace_product(pb.coef[k][1], z.y[1]) +
           pb.slack_coef[k] * z.s + pb.offset[k];
  return g;
}

struct Factor {
  bool ok = false;
  double logdet = 0.0;
  ComplexMatrix inverse;
};

Factor factor(const ComplexMatrix& y, bool need_inverse) {
  Factor f;
  Eigen::LLT<ComplexMatrix> llt(y);
  if (llt.info() != Eigen::Success) return f;
  const ComplexMatrix& l = llt.matrixLLT();
  for (Eigen::Index k = 0; k < l.rows(); ++k) {
    const double d = l(k, k).real();
    if (!(d > 0.0)) return f;
    f.logdet += 2.0 * std::log(d);
  }
  f.ok = true;
  if (need_inverse) f.inverse = llt.solve(ComplexMatrix::Identity(y.rows(), y.cols()));
  return f;
}

// Barrier objective -s/mu - sum log g - sum logdet Y; +inf outside the domain.
double objective(const Problem& pb, const Point& z, double mu) {
  const auto g = constraints(pb, z);
  double val = -z.s / mu;
  for (double gk : g) {
    if (!(gk > 0.0)) return std::numeric_limits<double>::infinity();
    val -= std::log(gk);
  }
  for (const auto& y : z.y) {
    const Factor f = factor(y, false);
    if (!f.ok) return std::numeric_limits<double>::infinity();
    val -= f.logdet;
  }
  return val;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

struct Step {
  std::array<ComplexMatrix, 2> dy;
  double ds = 0.0;
  double decrement2 = 0.0;  // -grad . step
  bool ok = false;
};

// Newton step for the barrier objective. The Hessian is
//   B + sum_k w_k a_k a_k^T  on (Y_1, Y_2, s),
// with B[D] = (Y_1^-1 D_1 Y_1^-1, Y_2^-1 D_2 Y_2^-1, 0) and w_k = 1/g_k^2.
// The Y-block is inverted with the Woodbury identity (B^-1[G] = Y G Y) and s
// is eliminated through its scalar Schur complement.
Step newton_step(const Problem& pb, const Point& z, double mu) {
  Step st;
  const auto g = constraints(pb, z);
  std::array<Factor, 2> fac;
  for (int i = 0; i < 2; ++i) {
    fac[i] = factor(z.y[i], true);
    if (!fac[i].ok) return st;
  }

  std::array<double, 3> w{};
  for (int k = 0; k < 3; ++k) w[k] = 1.0 / (g[k] * g[k]);

  // Gradient.
  std::array<ComplexMatrix, 2> grad;
  for (int i = 0; i < 2; ++i) {
    grad[i] = -fac[i].inverse;
    for (int k = 0; k < 3; ++k) grad[i] -= pb.coef[k][i] / g[k];
    grad[i] = hermitian_part(grad[i]);
  }
  double grad_s = -1.0 / mu;
  for (int k = 0; k < 3; ++k) grad_s -= pb.slack_coef[k] / g[k];

  // Q_k = B^-1 a_k and the 3x3 Gram matrix <a_k, Q_l>.
  std::array<std::array<ComplexMatrix, 2>, 3> q;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 2; ++i) q[k][i] = z.y[i] * pb.coef[k][i] * z.y[i];
  Eigen::Matrix3d gram;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      gram(k, l) = trace_product(pb.coef[k][0], q[l][0]) + trace_product(pb.coef[k][1], q[l][1]);
  Eigen::Matrix3d kmat = gram;
  for (int k = 0; k < 3; ++k) kmat(k, k) += 1.0 / w[k];
  const Eigen::LDLT<Eigen::Matrix3d> kfac(kmat);
  if (kfac.info() != Eigen::Success) return st;

  // r1 = Hxx^-1 (-grad)
  std::array<ComplexMatrix, 2> r1;
  for (int i = 0; i < 2; ++i) r1[i] = -(z.y[i] * grad[i] * z.y[i]);
  Eigen::Vector3d u;
  for (int k = 0; k < 3; ++k)
    u(k) = trace_product(pb.coef[k][0], r1[0]) + trace_product(pb.coef[k][1], r1[1]);
  const Eigen::Vector3d zc = kfac.solve(u);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k) r1[i] -= zc(k) * q[k][i];

  // h_xs = sum_k w_k beta_k a_k and r2 = Hxx^-1 h_xs = sum_k coeff_k Q_k.
  // With K = G + W^-1, coeff = K^-1 beta and the s-block Schur complement is
  // beta^T K^-1 beta; both forms avoid the cancellation of h_ss - <h_xs, r2>
  // when the weights w_k are large.
  Eigen::Vector3d beta;
  for (int k = 0; k < 3; ++k) beta(k) = pb.slack_coef[k];
  const Eigen::Vector3d coeff = kfac.solve(beta);
  Eigen::Vector3d wb;
  for (int k = 0; k < 3; ++k) wb(k) = w[k] * pb.slack_coef[k];

  // <h_xs, r1> = sum_k wb_k <a_k, r1>
  double hxs_r1 = 0.0;
  for (int k = 0; k < 3; ++k)
    hxs_r1 += wb(k) * (trace_product(pb.coef[k][0], r1[0]) + trace_product(pb.coef[k][1], r1[1]));
  const double schur = beta.dot(coeff);
  if (!(schur > 0.0)) return st;
  st.ds = (-grad_s - hxs_r1) / schur;
  for (int i = 0; i < 2; ++i) {
    ComplexMatrix r2 = ComplexMatrix::Zero(pb.dim, pb.dim);
    for (int k = 0; k < 3; ++k) r2 += coeff(k) * q[k][i];
    st.dy[i] = hermitian_part(r1[i] - st.ds * r2);
  }
  st.decrement2 = -(trace_product(grad[0], st.dy[0]) + trace_product(grad[1], st.dy[1]) +
                    grad_s * st.ds);
  st.ok = std::isfinite(st.decrement2);
  return st;
}

Point advance(const Point& z, const Step& st, double alpha) {
  Point out;
  for (int i = 0; i < 2; ++i) out.y[i] = z.y[i] + alpha * st.dy[i];
  out.s = z.s + alpha * st.ds;
  return out;
}

constexpr double kCenteringTol = 1e-10;  // decrement^2 / 2
constexpr int kMaxCenteringSteps = 200;

}  // namespace

SdpOutcome solve_feasibility(const SdpInstance& inst, const SdpOptions& opts) {
  inst.validate();
  const Problem pb = make_problem(inst);
  const double nu = 3.0 + 2.0 * static_cast<double>(pb.dim);

  // Strictly interior start.
  constexpr double eps = 0.1;
  Point z;
  for (auto& y : z.y)
    y = ComplexMatrix::Identity(pb.dim, pb.dim) / (2.0 * pb.dim * (1.0 + eps));
  z.s = 0.0;
  {
    const auto g = constraints(pb, z);
    z.s = std::min(g[0], g[1]) - 1.0;
  }

  SdpOutcome out;
  int total_steps = 0;
  double mu = 1.0;

  auto finish = [&](SdpStatus status, const std::string& msg) {
    out.status = status;
    out.message = msg;
    if (status == SdpStatus::feasible) {
      out.x1 = inst.power_budget * hermitian_part(z.y[0]);
      out.x2 = inst.power_budget * hermitian_part(z.y[1]);
      out.slack = certificate_slack(inst, out.x1, out.x2);
    }
    return out;
  };

  // Feasible certificate: normalised slack above -margin and the raw gaps
  // within -1e-7 (1 + t sigma^2).
  auto certifies = [&](double margin) {
    const ComplexMatrix x1 = inst.power_budget * hermitian_part(z.y[0]);
    const ComplexMatrix x2 = inst.power_budget * hermitian_part(z.y[1]);
    if (certificate_slack(inst, x1, x2) < -margin) return false;
    const double raw_tol = -1e-7 * (1.0 + inst.target * inst.noise_var);
    return sinr_gap(inst, x1, x2, 0) >= raw_tol && sinr_gap(inst, x1, x2, 1) >= raw_tol;
  };

  while (true) {
    int steps = 0;
    double f = objective(pb, z, mu);
    while (true) {
      if (total_steps >= opts.max_newton_steps || steps >= kMaxCenteringSteps) {
        std::ostringstream msg;
        msg << "Newton iteration budget exhausted at mu = " << mu << " after " << total_steps
            << " steps";
        return finish(SdpStatus::numeric_failure, msg.str());
      }
      const Step st = newton_step(pb, z, mu);
      if (!st.ok) return finish(SdpStatus::numeric_failure, "singular Newton system");
      if (st.decrement2 / 2.0 <= kCenteringTol) break;
      // Below this level the objective cannot resolve further decrease.
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
      if (st.decrement2 <= noise) break;

      double alpha = 1.0;
      Point next;
      double f_next = std::numeric_limits<double>::infinity();
      while (alpha > 1e-14) {
        next = advance(z, st, alpha);
        f_next = objective(pb, next, mu);
        if (f_next <= f - 0.25 * alpha * st.decrement2) break;
        alpha *= 0.5;
      }
      ++steps;
      ++total_steps;
      if (!(alpha > 1e-14)) {
        return finish(SdpStatus::numeric_failure, "line search stalled");
      }
      z = std::move(next);
      f = f_next;
    }

    const auto g = constraints(pb, z);
    SdpIterate rec;
    rec.mu = mu;
    rec.slack = std::min(g[0], g[1]) + z.s;
    rec.slack_bound = z.s + nu * mu;
    rec.newton_steps = steps;
    out.trace.push_back(rec);
    out.slack = rec.slack;
    out.slack_bound = rec.slack_bound;
    if (opts.verbose)
      std::fprintf(stderr, "sdp: t=%.6g mu=%.3e slack=%.6e bound=%.6e steps=%d\n", inst.target,
                   mu, rec.slack, rec.slack_bound, steps);

    if (opts.early_exit) {
      if (rec.slack >= 0.0 && certifies(0.0)) return finish(SdpStatus::feasible, "early exit");
      if (rec.slack_bound < -opts.feasibility_margin) {
        out.x1.resize(0, 0);
        return finish(SdpStatus::infeasible, "early exit");
      }
    }
    if (nu * mu <= opts.tol) {
      if (certifies(opts.feasibility_margin)) return finish(SdpStatus::feasible, "converged");
      return finish(SdpStatus::infeasible, "converged");
    }
    mu /= 10.0;
  }
}

}  // namespace relaynet
