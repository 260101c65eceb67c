#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "numeric.hpp"
#include "test_helpers.hpp"

using namespace spansim;

TEST_CASE("kernel of full-rank identity is empty") {
  CHECK(kernel_basis(Matrix::Identity(3, 3)).empty());
}

TEST_CASE("kernel of the zero map is the whole domain") {
  const auto basis = kernel_basis(Matrix::Zero(2, 3));
  REQUIRE(basis.size() == 3);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex overlap = basis[i].dot(basis[j]);
      CHECK(std::abs(overlap - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("kernel of the row (1 1) is (1,-1)/sqrt(2) up to phase") {
  Matrix row(1, 2);
  row << 1.0, 1.0;
  Tolerance tol;
  tol.rank_tol = 1e-10;
  const auto basis = kernel_basis(row, tol);
  REQUIRE(basis.size() == 1);
  Vector expected(2);
  expected << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  // hand null-space computation; compare up to a global phase
  CHECK(std::abs(std::abs(expected.dot(basis[0])) - 1.0) < 1e-12);
}

TEST_CASE("kernel rejects non-finite entries") {
  Matrix bad(1, 1);
  bad << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(kernel_basis(bad), InvalidInput);
}

TEST_CASE("kernel and row space ranks sum to the domain dimension") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.next_u64() % 6);
    const auto cols = static_cast<Eigen::Index>(1 + rng.next_u64() % 6);
    Matrix m = testutil::random_matrix(rng, rows, cols);
    if (trial % 3 == 0 && rows > 1) m.row(rows - 1) = m.row(0);  // force rank loss sometimes
    const auto kernel = kernel_basis(m);
    const auto row_space = range_basis(m.adjoint());
    CHECK(static_cast<Eigen::Index>(kernel.size()) + row_space.cols() == cols);
    for (const Vector& b : kernel) {
      CHECK((m * b).norm() <= 10.0 * 1e-10 * std::max(1.0, m.norm()));
    }
  }
}

TEST_CASE("projector onto a standard basis vector") {
  Vector e0(2);
  e0 << 1.0, 0.0;
  const Matrix p = projector_onto({e0}, 2);
  Matrix expected(2, 2);
  expected << 1.0, 0.0, 0.0, 0.0;
  CHECK((p - expected).norm() < 1e-12);
}

TEST_CASE("projector onto the empty basis is zero") {
  const Matrix p = projector_onto({}, 2);
  CHECK(p.norm() == 0.0);
  CHECK(p.rows() == 2);
}

TEST_CASE("projector onto (1,1)/sqrt(2) has all entries one half") {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Matrix p = projector_onto({v}, 2);  // outer product by hand: all entries 1/2
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(p(r, c) - Complex(0.5, 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("projector rejects dimension mismatch and dependent vectors") {
  Vector a(2), b(3);
  a << 1.0, 0.0;
  b << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(projector_onto({a, b}, 2), InvalidInput);
  Vector c(2);
  c << 2.0, 0.0;  // parallel to a, not orthonormalizable at full rank
  CHECK_THROWS_AS(projector_onto({a, c}, 2), InvalidInput);
}

TEST_CASE("projectors are idempotent and hermitian") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dim = static_cast<Eigen::Index>(2 + rng.next_u64() % 6);
    const auto count = static_cast<Eigen::Index>(1 + rng.next_u64() % dim);
    std::vector<Vector> basis;
    const Matrix q = testutil::random_unitary(rng, dim).leftCols(count);
    for (Eigen::Index i = 0; i < count; ++i) basis.push_back(q.col(i));
    const Matrix p = projector_onto(basis, dim);
    CHECK((p * p - p).norm() <= 1e-8);
    CHECK((p - p.adjoint()).norm() <= 1e-8);
  }
}

TEST_CASE("minimum-norm solution of (1 1) x = 1 is (1/2, 1/2)") {
  Matrix m(1, 2);
  m << 1.0, 1.0;
  Vector b(1);
  b << 1.0;
  const auto sol = min_norm_solution(m, b);  // pseudoinverse by hand
  REQUIRE(sol.feasible);
  CHECK(std::abs(sol.x(0) - Complex(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(sol.x(1) - Complex(0.5, 0.0)) < 1e-12);
}

TEST_CASE("zero map with nonzero target is infeasible") {
  const auto sol = min_norm_solution(Matrix::Zero(2, 2), Vector::Ones(2));
  CHECK_FALSE(sol.feasible);
}

TEST_CASE("identity map returns the target") {
  Rng rng(13);
  const Vector b = testutil::random_vector(rng, 4);
  const auto sol = min_norm_solution(Matrix::Identity(4, 4), b);
  REQUIRE(sol.feasible);
  CHECK((sol.x - b).norm() < 1e-12);
}

TEST_CASE("minimum-norm solutions are orthogonal to the kernel") {
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.next_u64() % 4);
    const auto cols = static_cast<Eigen::Index>(rows + 1 + rng.next_u64() % 3);
    const Matrix m = testutil::random_matrix(rng, rows, cols);
    const Vector b = m * testutil::random_vector(rng, cols);  // guaranteed feasible
    const auto sol = min_norm_solution(m, b);
    REQUIRE(sol.feasible);
    for (const Vector& k : kernel_basis(m)) {
      CHECK(std::abs(k.dot(sol.x)) <= 1e-8 * std::max(1.0, sol.x.norm()));
    }
  }
}

TEST_CASE("eigensystem of the identity has all phases zero") {
  const auto es = eig_unitary(Matrix::Identity(2, 2));
  CHECK(es.phases.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigensystem of diag(1,-1) has phases {0, pi}") {
  Matrix u(2, 2);
  u << 1.0, 0.0, 0.0, -1.0;
  const auto es = eig_unitary(u);
  CHECK(std::abs(es.phases(0) - 0.0) < 1e-12);
  CHECK(std::abs(es.phases(1) - M_PI) < 1e-12);
}

TEST_CASE("real rotation by phi has phases plus and minus phi") {
  const double phi = 0.7;  // analytic eigenvalues e^{+-i phi}
  Matrix u(2, 2);
  u << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  const auto es = eig_unitary(u);
  CHECK(std::abs(es.phases(0) + phi) < 1e-12);
  CHECK(std::abs(es.phases(1) - phi) < 1e-12);
}

TEST_CASE("non-unitary input is rejected") {
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(eig_unitary(m), InvalidInput);
}

TEST_CASE("eigensystem gram matrix is the identity and reconstruction is tight") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto dim = static_cast<Eigen::Index>(2 + rng.next_u64() % 10);
    const Matrix u = testutil::random_unitary(rng, dim);
    const auto es = eig_unitary(u);
    CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(dim, dim)).norm() <= 1e-8);
    Matrix diag = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) diag(i, i) = std::polar(1.0, es.phases(i));
    CHECK((u - es.vectors * diag * es.vectors.adjoint()).norm() <= 1e-7);
    for (Eigen::Index i = 0; i < dim; ++i) {
      CHECK(es.phases(i) > -M_PI);
      CHECK(es.phases(i) <= M_PI);
    }
  }
}
