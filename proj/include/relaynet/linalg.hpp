#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace relaynet {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when an input violates a documented precondition (shape, symmetry,
/// finiteness).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input is structurally valid but degenerate for the
/// requested operation (zero vector, empty null space, ...).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numeric routine fails to meet its contract.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order and column k of `vectors` belongs to `values[k]`.
/// Each eigenvector has its largest-magnitude entry made real and positive.
struct HermitianEig {
  RealVector values;
  ComplexMatrix vectors;
};

void require_finite(const ComplexMatrix& a, const char* what);

bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

/// Cyclic Jacobi eigensolver for small dense Hermitian matrices.
HermitianEig herm_eig(const ComplexMatrix& a);

/// Orthonormal basis (M x (M-1)) of the orthogonal complement of h, built from
/// the Householder reflector that maps h onto a multiple of e1.
ComplexMatrix null_basis(const ComplexVector& h);

/// I_n (x) A: block diagonal with n copies of A.
ComplexMatrix kron_identity(int n, const ComplexMatrix& a);

/// General Kronecker product A (x) B.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorisation.
ComplexVector vec(const ComplexMatrix& b);
ComplexMatrix unvec(const ComplexVector& v, int rows, int cols);

/// Sum of the n diagonal (side/n)-square blocks of a square matrix.
ComplexMatrix block_diagonal_sum(const ComplexMatrix& x, int n);

/// Number of eigenvalues above rel_tol * max(|lambda|).
int numeric_rank(const RealVector& descending_values, double rel_tol);

/// Re tr(A B) for Hermitian arguments; the real inner product on Hermitian
/// matrices.
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace relaynet
