#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "error.hpp"

namespace spansim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Hilbert-space dimensions stay desk scale; operations refuse anything larger.
inline constexpr int kMaxDimension = 256;

// Rank and assertion cutoffs used by every dense routine. rank_tol is relative
// to the largest singular value.
struct Tolerance {
  double rank_tol = 1e-10;
  double assert_tol = 1e-8;
  void validate() const;
};

bool is_finite(const Matrix& m);
bool is_finite(const Vector& v);
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

// Orthonormal basis of the null space of m. Singular values at most
// rank_tol * sigma_max count as zero.
std::vector<Vector> kernel_basis(const Matrix& m, const Tolerance& tol = {});

// Orthonormal basis of the column span of m as matrix columns (possibly 0 columns).
Matrix range_basis(const Matrix& m, const Tolerance& tol = {});

// Orthogonal projector onto the span of `basis` inside C^dim. Vectors that are
// orthonormal within assert_tol are used as-is; otherwise they are
// re-orthonormalized. Linearly dependent input is rejected.
Matrix projector_onto(const std::vector<Vector>& basis, Eigen::Index dim,
                      const Tolerance& tol = {});
Matrix projector_onto_columns(const Matrix& basis_columns, const Tolerance& tol = {});

struct MinNormSolution {
  bool feasible = false;
  Vector x;
  double residual = 0.0;
};

// Minimum-norm x with m x = b, or infeasible when the least-squares residual
// exceeds 10 * rank_tol * (|m| + |b|). scale_floor guards composite problems
// where m may be numerically zero relative to an ambient operator scale: the
// rank cutoff becomes rank_tol * max(sigma_max, scale_floor).
MinNormSolution min_norm_solution(const Matrix& m, const Vector& b,
                                  const Tolerance& tol = {}, double scale_floor = 0.0);

// Least-squares solve (pseudoinverse with the same cutoff rule); no
// feasibility requirement.
Vector least_squares(const Matrix& m, const Vector& b, const Tolerance& tol = {},
                     double scale_floor = 0.0);

struct UnitaryEigensystem {
  RealVector phases;  // eigenphases in (-pi, pi], ascending
  Matrix vectors;     // orthonormal columns, one per phase
  int queries_per_application = 0;
  int dim() const { return static_cast<int>(vectors.rows()); }
};

// Full eigendecomposition of a unitary via a Schur factorization, so the
// returned eigenvectors are orthonormal even across (near-)degenerate phases.
UnitaryEigensystem eig_unitary(const Matrix& u, const Tolerance& tol = {});

}  // namespace spansim
