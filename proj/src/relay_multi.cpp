#include "relaynet/relay_multi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace relaynet {

SdpInstance make_instance(const ComplexVector& h1, const ComplexVector& h2, double relay_power,
                          double noise_var, double target, Formulation form, int n_streams) {
  SdpInstance inst;
  const ComplexMatrix g1 = h1 * h1.adjoint();
  const ComplexMatrix g2 = h2 * h2.adjoint();
  if (form == Formulation::full) {
    inst.c1 = kron_identity(n_streams, g1);
    inst.c2 = kron_identity(n_streams, g2);
  } else {
    inst.c1 = g1;
    inst.c2 = g2;
  }
  inst.target = target;
  inst.noise_var = noise_var;
  inst.power_budget = relay_power;
  return inst;
}

SdpInstance reduce_dimension(const SdpInstance& full, int n_blocks) {
  if (n_blocks < 1 || full.dim() % n_blocks != 0)
    throw ContractError("reduce_dimension: side is not a multiple of the block count");
  const Eigen::Index m = full.dim() / n_blocks;
  SdpInstance out = full;
  out.c1 = full.c1.topLeftCorner(m, m);
  out.c2 = full.c2.topLeftCorner(m, m);
  const double tol = 1e-12 * std::max(full.c1.norm(), full.c2.norm());
  if ((kron_identity(n_blocks, out.c1) - full.c1).norm() > tol ||
      (kron_identity(n_blocks, out.c2) - full.c2).norm() > tol)
    throw ContractError("reduce_dimension: C_i is not of the form I_n (x) A");
  return out;
}

namespace {

struct Factorised {
  ComplexMatrix v;  // X = V V^H, V is dim x rank
  int rank = 0;
};

Factorised factorise(const ComplexMatrix& x) {
  const HermitianEig eig = herm_eig(0.5 * (x + x.adjoint()));
  Factorised f;
  f.rank = numeric_rank(eig.values, kRankTol);
  f.v.resize(x.rows(), f.rank);
  for (int k = 0; k < f.rank; ++k) f.v.col(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k);
  return f;
}

// Real coordinates of an r x r Hermitian matrix: r diagonal entries, then
// (Re, Im) of each strictly upper entry.
int hermitian_params(int r) { return r * r; }

// Coefficients c such that tr(A D) = c . params(D) for Hermitian A.
void trace_coefficients(const ComplexMatrix& a, double scale, double* out) {
  const auto r = a.rows();
  int idx = 0;
  for (Eigen::Index k = 0; k < r; ++k) out[idx++] = scale * a(k, k).real();
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index l = k + 1; l < r; ++l) {
      out[idx++] = scale * 2.0 * a(l, k).real();
      out[idx++] = scale * -2.0 * a(l, k).imag();
    }
}

ComplexMatrix hermitian_from_params(const double* p, int r) {
  ComplexMatrix d(r, r);
  int idx = 0;
  for (int k = 0; k < r; ++k) d(k, k) = p[idx++];
  for (int k = 0; k < r; ++k)
    for (int l = k + 1; l < r; ++l) {
      d(k, l) = cplx(p[idx], p[idx + 1]);
      d(l, k) = std::conj(d(k, l));
      idx += 2;
    }
  return d;
}

// A nonzero vector orthogonal to the rows of a (3 x W, W > 3): orthonormalise
// the rows, then project out of the unit vector e_k whose residual is largest.
Eigen::VectorXd null_vector(const Eigen::MatrixXd& a) {
  const Eigen::Index w = a.cols();
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Eigen::VectorXd row = a.row(i).transpose();
    const double norm0 = row.norm();
    for (const auto& q : basis) row -= q.dot(row) * q;
    for (const auto& q : basis) row -= q.dot(row) * q;
    const double norm = row.norm();
    if (norm > 1e-13 * std::max(norm0, 1e-300)) basis.push_back(row / norm);
  }
  Eigen::Index best = 0;
  double best_res = -1.0;
  for (Eigen::Index k = 0; k < w; ++k) {
    double proj = 0.0;
    for (const auto& q : basis) proj += q(k) * q(k);
    if (1.0 - proj > best_res) {
      best_res = 1.0 - proj;
      best = k;
    }
  }
  Eigen::VectorXd x = Eigen::VectorXd::Unit(w, best);
  for (const auto& q : basis) x -= q(best) * q;
  for (const auto& q : basis) x -= q.dot(x) * q;
  return x;
}

}  // namespace

RankReduction rank_reduce(const ComplexMatrix& x1, const ComplexMatrix& x2,
                          const SdpInstance& inst) {
  inst.validate();
  if (x1.rows() != inst.dim() || x2.rows() != inst.dim())
    throw ContractError("rank_reduce: X dimensions do not match the instance");

  RankReduction out;
  out.z1 = x1;
  out.z2 = x2;
  const double t = inst.target;
  const int max_iterations = 4 * static_cast<int>(inst.dim() * inst.dim()) + 4;

  while (true) {
    const Factorised f1 = factorise(out.z1);
    const Factorised f2 = factorise(out.z2);
    out.ranks = {f1.rank, f2.rank};
    const int w1 = hermitian_params(f1.rank);
    const int w2 = hermitian_params(f2.rank);
    if (w1 + w2 <= 3) break;
    if (out.iterations >= max_iterations) {
      std::ostringstream msg;
      msg << "rank_reduce: no progress after " << out.iterations << " iterations (ranks "
          << f1.rank << ", " << f2.rank << ")";
      throw NumericError(msg.str());
    }

    // Linear functionals on (Delta_1, Delta_2) that keep both SINR gaps and the
    // total power unchanged.
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(3, w1 + w2);
    const ComplexMatrix a11 = f1.v.adjoint() * inst.c1 * f1.v;
    const ComplexMatrix a12 = f2.v.adjoint() * inst.c1 * f2.v;
    const ComplexMatrix a21 = f1.v.adjoint() * inst.c2 * f1.v;
    const ComplexMatrix a22 = f2.v.adjoint() * inst.c2 * f2.v;
    const ComplexMatrix p1 = f1.v.adjoint() * f1.v;
    const ComplexMatrix p2 = f2.v.adjoint() * f2.v;
    std::vector<double> buf(static_cast<std::size_t>(std::max(w1, w2)));
    auto put = [&](int row, int offset, const ComplexMatrix& a, double scale, int count) {
      trace_coefficients(a, scale, buf.data());
      for (int k = 0; k < count; ++k) sys(row, offset + k) = buf[static_cast<std::size_t>(k)];
    };
    put(0, 0, a11, 1.0, w1);
    put(0, w1, a12, -t, w2);
    put(1, 0, a21, -t, w1);
    put(1, w1, a22, 1.0, w2);
    put(2, 0, p1, 1.0, w1);
    put(2, w1, p2, 1.0, w2);

    const Eigen::VectorXd x = null_vector(sys);
    ComplexMatrix d1 = hermitian_from_params(x.data(), f1.rank);
    ComplexMatrix d2 = hermitian_from_params(x.data() + w1, f2.rank);

    double delta0 = 0.0;
    for (const ComplexMatrix* d : {&d1, &d2}) {
      if (d->rows() == 0) continue;
      const HermitianEig e = herm_eig(*d);
      for (Eigen::Index k = 0; k < e.values.size(); ++k)
        if (std::abs(e.values(k)) > std::abs(delta0)) delta0 = e.values(k);
    }
    if (delta0 == 0.0) throw NumericError("rank_reduce: null direction is zero");

    auto update = [&](const Factorised& f, const ComplexMatrix& d) {
      if (f.rank == 0) return ComplexMatrix(ComplexMatrix::Zero(inst.dim(), inst.dim()));
      const ComplexMatrix core = ComplexMatrix::Identity(f.rank, f.rank) - d / delta0;
      ComplexMatrix z = f.v * core * f.v.adjoint();
      return ComplexMatrix(0.5 * (z + z.adjoint()));
    };
    out.z1 = update(f1, d1);
    out.z2 = update(f2, d2);
    ++out.iterations;
  }
  return out;
}

ComplexMatrix extract_beamformer(const ComplexMatrix& z, int m, int n_streams) {
  const bool lifted = z.rows() == Eigen::Index{m} * n_streams;
  if (!lifted && z.rows() != m)
    throw ContractError("extract_beamformer: Z has neither M nor MN rows");
  ComplexMatrix b = ComplexMatrix::Zero(m, n_streams);
  const HermitianEig eig = herm_eig(0.5 * (z + z.adjoint()));
  const double top = eig.values(0);
  if (!(top > 0.0)) return b;
  if (eig.values.size() > 1 && eig.values(1) > 1e-6 * top) {
    std::ostringstream msg;
    msg << "extract_beamformer: not rank one (lambda_2 / lambda_1 = " << eig.values(1) / top << ")";
    throw NumericError(msg.str());
  }
  const ComplexVector v = std::sqrt(top) * eig.vectors.col(0);
  if (lifted) return unvec(v, m, n_streams);
  b.col(0) = v;
  return b;
}

double multiuser_sinr(const ComplexVector& h, const ComplexMatrix& own, const ComplexMatrix& other,
                      double noise_var) {
  return (own.adjoint() * h).squaredNorm() / ((other.adjoint() * h).squaredNorm() + noise_var);
}

namespace {

void check_arguments(const ComplexVector& h1, const ComplexVector& h2, double relay_power,
                     double noise_var, int n_streams) {
  require_finite(h1, "max_min_sinr");
  require_finite(h2, "max_min_sinr");
  if (h1.size() != h2.size()) throw ContractError("max_min_sinr: channel lengths differ");
  if (h1.norm() == 0.0 || h2.norm() == 0.0) throw DegenerateInput("max_min_sinr: zero channel");
  if (!(relay_power > 0.0) || !(noise_var > 0.0))
    throw ContractError("max_min_sinr: power and noise must be positive");
  if (n_streams < 1) throw ContractError("max_min_sinr: N must be >= 1");
}

// One feasibility solve, retried once with looser tolerances on numeric failure.
SdpOutcome solve_with_retry(const SdpInstance& inst, const SdpOptions& sdp) {
  SdpOutcome res = solve_feasibility(inst, sdp);
  if (res.status == SdpStatus::numeric_failure) {
    SdpOptions retry = sdp;
    retry.tol *= 100.0;
    retry.feasibility_margin *= 100.0;
    retry.early_exit = true;
    res = solve_feasibility(inst, retry);
  }
  return res;
}

// Projects each beam off the other user's channel and rescales to the relay
// budget. The projected pair is kept only when its worse SINR is no lower.
void zero_force(MultiBeamformer& out, const ComplexVector& h1, const ComplexVector& h2,
                double relay_power, double noise_var) {
  auto project_off = [](const ComplexMatrix& b, const ComplexVector& h) {
    return ComplexMatrix(b - h * (h.adjoint() * b) / h.squaredNorm());
  };
  ComplexMatrix c1 = project_off(out.b1, h2);
  ComplexMatrix c2 = project_off(out.b2, h1);
  const double power = c1.squaredNorm() + c2.squaredNorm();
  if (!(power > 0.0)) return;
  const double scale = std::sqrt(relay_power / power);
  c1 *= scale;
  c2 *= scale;
  const std::array<double, 2> sinr = {multiuser_sinr(h1, c1, c2, noise_var),
                                      multiuser_sinr(h2, c2, c1, noise_var)};
  if (std::min(sinr[0], sinr[1]) < std::min(out.achieved_sinr[0], out.achieved_sinr[1])) return;
  out.b1 = std::move(c1);
  out.b2 = std::move(c2);
  out.achieved_sinr = sinr;
  out.total_power = out.b1.squaredNorm() + out.b2.squaredNorm();
  out.zero_forced = true;
}

// Purifies a feasible pair for target t and fills the beamformer fields.
void finish(MultiBeamformer& out, const ComplexVector& h1, const ComplexVector& h2,
            double relay_power, double noise_var, int n_streams, Formulation form, double t,
            const ComplexMatrix& x1, const ComplexMatrix& x2) {
  const int m = static_cast<int>(h1.size());
  const SdpInstance inst = make_instance(h1, h2, relay_power, noise_var, t, form, n_streams);
  const RankReduction rr = rank_reduce(x1, x2, inst);
  out.b1 = extract_beamformer(rr.z1, m, n_streams);
  out.b2 = extract_beamformer(rr.z2, m, n_streams);
  out.ranks = rr.ranks;
  for (int i = 0; i < 2; ++i) {
    const RealVector ev = herm_eig(i == 0 ? rr.z1 : rr.z2).values;
    out.eig_ratio[i] = ev.size() > 1 && ev(0) > 0.0 ? std::max(ev(1), 0.0) / ev(0) : 0.0;
  }
  out.purification_steps = rr.iterations;
  out.achieved_sinr = {multiuser_sinr(h1, out.b1, out.b2, noise_var),
                       multiuser_sinr(h2, out.b2, out.b1, noise_var)};
  out.total_power = out.b1.squaredNorm() + out.b2.squaredNorm();
  zero_force(out, h1, h2, relay_power, noise_var);
}

}  // namespace

MultiBeamformer max_min_sinr(const ComplexVector& h1, const ComplexVector& h2,
                             double relay_power, double noise_var, int n_streams,
                             const MultiOptions& opts) {
  check_arguments(h1, h2, relay_power, noise_var, n_streams);
  if (!(opts.eps_rel > 0.0) && !(opts.eps_abs > 0.0))
    throw ContractError("max_min_sinr: bisection tolerance must be positive");

  double lower = 0.0;
  double upper = relay_power * std::min(h1.squaredNorm(), h2.squaredNorm()) / noise_var;
  const double eps = opts.eps_abs > 0.0 ? opts.eps_abs : opts.eps_rel * upper;

  auto solve_at = [&](double t) {
    return solve_with_retry(
        make_instance(h1, h2, relay_power, noise_var, t, opts.formulation, n_streams), opts.sdp);
  };

  MultiBeamformer out;
  ComplexMatrix best1;
  ComplexMatrix best2;
  bool have_solution = false;
  do {
    const double t = 0.5 * (lower + upper);
    const SdpOutcome res = solve_at(t);
    ++out.bisection_steps;
    if (res.status == SdpStatus::numeric_failure) {
      std::ostringstream msg;
      msg << "max_min_sinr: solver failed at t = " << t << " (" << res.message << "), bracket ["
          << lower << ", " << upper << "]";
      throw BisectionFailure(msg.str(), lower, upper);
    }
    if (res.status == SdpStatus::feasible) {
      lower = t;
      best1 = res.x1;
      best2 = res.x2;
      have_solution = true;
    } else {
      upper = t;
    }
  } while (upper - lower > eps);

  if (!have_solution) {
    const SdpOutcome res = solve_at(0.0);
    if (res.status != SdpStatus::feasible)
      throw BisectionFailure("max_min_sinr: t = 0 not certified feasible", lower, upper);
    best1 = res.x1;
    best2 = res.x2;
  }

  finish(out, h1, h2, relay_power, noise_var, n_streams, opts.formulation, lower, best1, best2);
  out.t_star = lower;
  out.upper_bound = upper;
  return out;
}

std::optional<MultiBeamformer> beamform_for_target(const ComplexVector& h1,
                                                   const ComplexVector& h2, double relay_power,
                                                   double noise_var, int n_streams, double target,
                                                   const MultiOptions& opts) {
  check_arguments(h1, h2, relay_power, noise_var, n_streams);
  if (!(target >= 0.0) || !std::isfinite(target))
    throw ContractError("beamform_for_target: target must be finite and >= 0");
  const double upper = relay_power * std::min(h1.squaredNorm(), h2.squaredNorm()) / noise_var;
  if (target > upper) return std::nullopt;

  const SdpOutcome res = solve_with_retry(
      make_instance(h1, h2, relay_power, noise_var, target, opts.formulation, n_streams),
      opts.sdp);
  if (res.status == SdpStatus::numeric_failure)
    throw BisectionFailure("beamform_for_target: solver failed (" + res.message + ")", 0.0, upper);
  if (res.status == SdpStatus::infeasible) return std::nullopt;

  MultiBeamformer out;
  out.bisection_steps = 1;
  finish(out, h1, h2, relay_power, noise_var, n_streams, opts.formulation, target, res.x1, res.x2);
  out.t_star = target;
  out.upper_bound = upper;
  return out;
}

}  // namespace relaynet
