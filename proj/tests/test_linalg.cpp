#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "helpers.hpp"
#include "relaynet/linalg.hpp"

using namespace relaynet;
using namespace relaynet::testing;

TEST_CASE("herm_eig: identity has unit eigenvalues and an orthonormal basis") {
  const HermitianEig e = herm_eig(ComplexMatrix::Identity(2, 2));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("herm_eig: diagonal input returns sorted values and coordinate vectors") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 3.0;
  const HermitianEig e = herm_eig(a);
  CHECK(e.values(0) == doctest::Approx(3.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(1, 0) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(e.vectors(0, 1) - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("herm_eig: 2x2 with imaginary off-diagonal") {
  ComplexMatrix a(2, 2);
  a << 2.0, cplx(0, 1), cplx(0, -1), 2.0;
  const HermitianEig e = herm_eig(a);
  // (2 - l)^2 - 1 = 0
  CHECK(e.values(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("herm_eig: residual, orthonormality and agreement with Eigen's solver") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 3, 5, 9, 18}) {
    for (int rep = 0; rep < 20; ++rep) {
      const ComplexMatrix a = random_hermitian(rng, n);
      const HermitianEig e = herm_eig(a);
      double worst = 0.0;
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, (a * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm());
      CHECK(worst <= 1e-9 * a.norm());
      CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)).norm() < 1e-12);

      Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(a);
      for (int k = 0; k < n; ++k)
        CHECK(std::abs(e.values(k) - ref.eigenvalues()(n - 1 - k)) < 1e-11 * (1.0 + a.norm()));
      for (int k = 0; k + 1 < n; ++k) CHECK(e.values(k) >= e.values(k + 1));
    }
  }
}

TEST_CASE("herm_eig: deterministic phase convention") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_hermitian(rng, 4);
  const HermitianEig e = herm_eig(a);
  for (int k = 0; k < 4; ++k) {
    Eigen::Index idx = 0;
    e.vectors.col(k).cwiseAbs().maxCoeff(&idx);
    CHECK(std::abs(e.vectors(idx, k).imag()) < 1e-15);
    CHECK(e.vectors(idx, k).real() > 0.0);
  }
  const HermitianEig again = herm_eig(a);
  CHECK((again.vectors - e.vectors).norm() == 0.0);
}

TEST_CASE("herm_eig: PSD input has no materially negative eigenvalue") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix a = random_psd(rng, 6, 2);
    const HermitianEig e = herm_eig(a);
    CHECK(e.values.minCoeff() >= -1e-10 * e.values(0));
    CHECK(numeric_rank(e.values, 1e-9) == 2);
  }
}

TEST_CASE("herm_eig: contract violations") {
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), ContractError);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eig(a), ContractError);
  a = ComplexMatrix::Identity(2, 2);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(herm_eig(a), ContractError);
}

TEST_CASE("null_basis: small hand-checked cases") {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  ComplexMatrix u = null_basis(e1);
  REQUIRE(u.rows() == 2);
  REQUIRE(u.cols() == 1);
  CHECK(std::abs(u(0, 0)) < 1e-15);
  CHECK(std::abs(std::abs(u(1, 0)) - 1.0) < 1e-15);

  ComplexVector h(2);
  h << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  u = null_basis(h);
  // u must be a unit multiple of (1, -1)/sqrt(2).
  const cplx phase = u(0, 0) * std::sqrt(2.0);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-14);
  CHECK(std::abs(u(1, 0) + phase / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("null_basis: orthonormal complement on random vectors") {
  std::mt19937_64 rng(8);
  for (int m : {2, 3, 4, 6}) {
    for (int rep = 0; rep < 25; ++rep) {
      const ComplexVector h = random_vector(rng, m);
      const ComplexMatrix u = null_basis(h);
      REQUIRE(u.cols() == m - 1);
      CHECK((u.adjoint() * h).norm() <= 1e-10 * h.norm());
      CHECK((u.adjoint() * u - ComplexMatrix::Identity(m - 1, m - 1)).norm() < 1e-13);
    }
  }
}

TEST_CASE("null_basis: Kronecker lift annihilates blockwise") {
  std::mt19937_64 rng(9);
  const ComplexVector h = random_vector(rng, 4);
  const ComplexMatrix u = null_basis(h);
  const ComplexMatrix prod = kron_identity(3, h.adjoint()) * kron_identity(3, u);
  CHECK(prod.rows() == 3);
  CHECK(prod.cols() == 9);
  CHECK(prod.norm() <= 1e-10);
}

TEST_CASE("null_basis: degenerate inputs") {
  CHECK_THROWS_AS(null_basis(ComplexVector::Zero(3)), DegenerateInput);
  CHECK(null_basis(ComplexVector::Ones(1)).cols() == 0);
}

TEST_CASE("kron_identity and kron") {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_matrix(rng, 2, 2);
  CHECK(kron_identity(1, a) == a);
  CHECK(kron_identity(2, ComplexMatrix::Ones(1, 1)) == ComplexMatrix::Identity(2, 2));
  const ComplexMatrix k = kron_identity(2, a);
  CHECK(k.rows() == 4);
  CHECK(k.block(0, 0, 2, 2) == a);
  CHECK(k.block(2, 2, 2, 2) == a);
  CHECK(k.block(0, 2, 2, 2).norm() == 0.0);
  CHECK(k.block(2, 0, 2, 2).norm() == 0.0);
  CHECK((kron(ComplexMatrix::Identity(2, 2), a) - k).norm() == 0.0);

  const ComplexMatrix b = random_matrix(rng, 3, 2);
  const ComplexMatrix kb = kron(a, b);
  CHECK(kb.rows() == 6);
  CHECK(kb.cols() == 4);
  CHECK(std::abs(kb(4, 3) - a(1, 1) * b(1, 1)) < 1e-15);
}

TEST_CASE("vec/unvec: column stacking and round trip") {
  ComplexMatrix b(2, 2);
  b << 1.0, 3.0, 2.0, 4.0;
  const ComplexVector v = vec(b);
  for (int i = 0; i < 4; ++i) CHECK(v(i) == cplx(i + 1.0, 0.0));

  std::mt19937_64 rng(2);
  const ComplexMatrix r = random_matrix(rng, 3, 3);
  CHECK(unvec(vec(r), 3, 3) == r);
  CHECK_THROWS_AS(unvec(vec(r), 2, 3), ContractError);
}

TEST_CASE("vec identity: vec(A X C) = (C^T kron A) vec(X)") {
  std::mt19937_64 rng(4);
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  const ComplexMatrix x = random_matrix(rng, 3, 2);
  const ComplexMatrix c = random_matrix(rng, 2, 2);
  const ComplexVector lhs = vec(a * x * c);
  const ComplexVector rhs = kron(c.transpose(), a) * vec(x);
  CHECK((lhs - rhs).norm() < 1e-12 * lhs.norm());
}

TEST_CASE("block_diagonal_sum and trace_product") {
  std::mt19937_64 rng(6);
  const ComplexMatrix a = random_hermitian(rng, 3);
  CHECK((block_diagonal_sum(kron_identity(4, a), 4) - 4.0 * a).norm() < 1e-13);
  CHECK(block_diagonal_sum(a, 1) == a);
  CHECK_THROWS_AS(block_diagonal_sum(a, 2), ContractError);

  const ComplexMatrix b = random_hermitian(rng, 3);
  CHECK(trace_product(a, b) == doctest::Approx((a * b).trace().real()).epsilon(1e-13));

  // tr((I kron h h^H) X) = h^H S h with S the block-diagonal sum
  const ComplexVector h = random_vector(rng, 3);
  const ComplexMatrix x = random_psd(rng, 6, 6);
  const double full = trace_product(kron_identity(2, h * h.adjoint()), x);
  const double reduced = (h.adjoint() * block_diagonal_sum(x, 2) * h)(0).real();
  CHECK(full == doctest::Approx(reduced).epsilon(1e-12));
}
