#include "relaynet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace relaynet {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm2(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      if (r != c) sum += std::norm(a(r, c));
  return sum;
}

// One Jacobi rotation zeroing a(p, q). The 2x2 Hermitian block is first made
// real by a phase on column q, then annihilated by a real plane rotation.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx phase = std::conj(apq) / mag;  // e^{-i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // A <- A G with G_pp = c, G_pq = s, G_qp = -s e^{-i phi}, G_qq = c e^{-i phi}
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = c * akp - s * phase * akq;
    a(k, q) = s * akp + c * phase * akq;
  }
  // A <- G^H A
  const cplx cphase = std::conj(phase);
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = c * apk - s * cphase * aqk;
    a(q, k) = s * apk + c * cphase * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index k = 0; k < v.rows(); ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = c * vkp - s * phase * vkq;
    v(k, q) = s * vkp + c * phase * vkq;
  }
}

}  // namespace

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) throw ContractError(std::string(what) + ": non-finite entry");
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.norm(), 1e-300);
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

HermitianEig herm_eig(const ComplexMatrix& input) {
  if (input.rows() != input.cols()) throw ContractError("herm_eig: matrix is not square");
  require_finite(input, "herm_eig");
  if (!is_hermitian(input)) throw ContractError("herm_eig: matrix is not Hermitian");

  const Eigen::Index n = input.rows();
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale2 = a.squaredNorm();
  const double target = scale2 * 1e-32;
  for (int sweep = 0; sweep < kMaxSweeps && scale2 > 0.0; ++sweep) {
    if (off_diagonal_norm2(a) <= target) break;
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    ComplexVector col = v.col(src);
    Eigen::Index big = 0;
    col.cwiseAbs2().maxCoeff(&big);
    const double mag = std::abs(col(big));
    if (mag > 0.0) col *= std::conj(col(big)) / mag;
    out.vectors.col(k) = col;
  }
  return out;
}

ComplexMatrix null_basis(const ComplexVector& h) {
  require_finite(h, "null_basis");
  const Eigen::Index m = h.size();
  const double norm = h.norm();
  if (m == 0 || norm == 0.0) throw DegenerateInput("null_basis: zero vector");

  const double mag0 = std::abs(h(0));
  const cplx phase = mag0 > 0.0 ? h(0) / mag0 : cplx(1.0, 0.0);
  // H = I - 2 w w^H / (w^H w) with w = h + phase*|h| e1 maps h to -phase*|h| e1.
  ComplexVector w = h;
  w(0) += phase * norm;
  const double ww = w.squaredNorm();
  ComplexMatrix reflector = ComplexMatrix::Identity(m, m) - (2.0 / ww) * (w * w.adjoint());
  return reflector.rightCols(m - 1);
}

ComplexMatrix kron_identity(int n, const ComplexMatrix& a) {
  if (n < 1) throw ContractError("kron_identity: n must be >= 1");
  ComplexMatrix out = ComplexMatrix::Zero(n * a.rows(), n * a.cols());
  for (int k = 0; k < n; ++k) out.block(k * a.rows(), k * a.cols(), a.rows(), a.cols()) = a;
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector vec(const ComplexMatrix& b) {
  // Eigen storage is column-major, so the raw buffer is already column-stacked.
  return Eigen::Map<const ComplexVector>(b.data(), b.size());
}

ComplexMatrix unvec(const ComplexVector& v, int rows, int cols) {
  if (rows < 0 || cols < 0 || v.size() != Eigen::Index{rows} * cols)
    throw ContractError("unvec: length " + std::to_string(v.size()) + " does not match " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

ComplexMatrix block_diagonal_sum(const ComplexMatrix& x, int n) {
  if (n < 1 || x.rows() != x.cols() || x.rows() % n != 0)
    throw ContractError("block_diagonal_sum: side is not a multiple of the block count");
  const Eigen::Index m = x.rows() / n;
  ComplexMatrix s = ComplexMatrix::Zero(m, m);
  for (int k = 0; k < n; ++k) s += x.block(k * m, k * m, m, m);
  return s;
}

int numeric_rank(const RealVector& values, double rel_tol) {
  if (values.size() == 0) return 0;
  const double top = values.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (values(k) > rel_tol * top) ++rank;
  return rank;
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Re tr(AB) = Re sum_ij A_ij B_ji
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) sum += (a(i, j) * b(j, i)).real();
  return sum;
}

}  // namespace relaynet
