#include "numeric.hpp"

#include <cmath>

namespace spansim {

void Tolerance::validate() const {
  if (!(rank_tol > 0.0) || rank_tol > 1e-6) {
    throw InvalidInput("tolerance: rank_tol must lie in (0, 1e-6]");
  }
  if (!(assert_tol > 0.0) || assert_tol > 1e-6 * 100) {
    throw InvalidInput("tolerance: assert_tol must lie in (0, 1e-4]");
  }
}

bool is_finite(const Matrix& m) { return m.allFinite(); }
bool is_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

namespace {

Eigen::Index rank_from_singular_values(const RealVector& sigma, double rank_tol,
                                       double scale_floor = 0.0) {
  const double scale = std::max(sigma.size() > 0 ? sigma(0) : 0.0, scale_floor);
  const double cutoff = rank_tol * scale;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace

std::vector<Vector> kernel_basis(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("kernel_basis: empty matrix");
  require_finite(m, "kernel_basis");

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Eigen::Index rank = rank_from_singular_values(svd.singularValues(), tol.rank_tol);
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(m.cols() - rank));
  for (Eigen::Index i = rank; i < m.cols(); ++i) {
    basis.push_back(svd.matrixV().col(i));
  }
  return basis;
}

Matrix range_basis(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  require_finite(m, "range_basis");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Eigen::Index rank = rank_from_singular_values(svd.singularValues(), tol.rank_tol);
  return svd.matrixU().leftCols(rank);
}

Matrix projector_onto_columns(const Matrix& basis_columns, const Tolerance& tol) {
  tol.validate();
  const Eigen::Index dim = basis_columns.rows();
  if (basis_columns.cols() == 0) return Matrix::Zero(dim, dim);
  require_finite(basis_columns, "projector_onto");

  const Matrix gram = basis_columns.adjoint() * basis_columns;
  const double deviation =
      (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  Matrix q = basis_columns;
  if (deviation > tol.assert_tol) {
    q = range_basis(basis_columns, tol);
    if (q.cols() != basis_columns.cols()) {
      throw InvalidInput("projector_onto: vectors are linearly dependent");
    }
  }
  return q * q.adjoint();
}

Matrix projector_onto(const std::vector<Vector>& basis, Eigen::Index dim,
                      const Tolerance& tol) {
  if (dim <= 0) throw InvalidInput("projector_onto: dimension must be positive");
  Matrix cols(dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != dim) {
      throw InvalidInput("projector_onto: basis vector dimension mismatch");
    }
    cols.col(static_cast<Eigen::Index>(i)) = basis[i];
  }
  return projector_onto_columns(cols, tol);
}

MinNormSolution min_norm_solution(const Matrix& m, const Vector& b, const Tolerance& tol,
                                  double scale_floor) {
  tol.validate();
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("min_norm_solution: empty matrix");
  if (b.size() != m.rows()) throw InvalidInput("min_norm_solution: dimension mismatch");
  require_finite(m, "min_norm_solution");
  require_finite(b, "min_norm_solution");

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  const Eigen::Index rank = rank_from_singular_values(sigma, tol.rank_tol, scale_floor);
  const Vector projected = svd.matrixU().adjoint() * b;
  Vector coeffs = Vector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < rank; ++i) coeffs(i) = projected(i) / sigma(i);

  MinNormSolution out;
  out.x = svd.matrixV() * coeffs;
  out.residual = (m * out.x - b).norm();
  const double scale = (sigma.size() > 0 ? sigma(0) : 0.0) + b.norm();
  out.feasible = out.residual <= 10.0 * tol.rank_tol * scale;
  return out;
}

Vector least_squares(const Matrix& m, const Vector& b, const Tolerance& tol,
                     double scale_floor) {
  tol.validate();
  if (m.cols() == 0) return Vector(0);
  if (b.size() != m.rows()) throw InvalidInput("least_squares: dimension mismatch");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  const Eigen::Index rank = rank_from_singular_values(sigma, tol.rank_tol, scale_floor);
  const Vector projected = svd.matrixU().adjoint() * b;
  Vector coeffs = Vector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < rank; ++i) coeffs(i) = projected(i) / sigma(i);
  return svd.matrixV() * coeffs;
}

UnitaryEigensystem eig_unitary(const Matrix& u, const Tolerance& tol) {
  tol.validate();
  if (u.rows() == 0 || u.rows() != u.cols()) {
    throw InvalidInput("eig_unitary: matrix must be square and nonempty");
  }
  if (u.rows() > kMaxDimension) {
    throw InvalidInput("eig_unitary: dimension exceeds the desk-scale cap");
  }
  require_finite(u, "eig_unitary");
  const double unitarity = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
  if (unitarity > 1e-8) {
    throw InvalidInput("eig_unitary: input is not unitary (|U^dag U - I| = " +
                       std::to_string(unitarity) + ")");
  }

  Eigen::ComplexSchur<Matrix> schur(u, true);
  if (schur.info() != Eigen::Success) throw InternalError("eig_unitary: Schur failed");
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();

  const Eigen::Index n = u.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  RealVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double phase = std::arg(t(i, i));
    if (phase <= -M_PI) phase += 2.0 * M_PI;  // canonicalize to (-pi, pi]
    phases(i) = phase;
    order[static_cast<std::size_t>(i)] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phases(a) < phases(b); });

  UnitaryEigensystem es;
  es.phases = RealVector(n);
  es.vectors = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    es.phases(i) = phases(order[static_cast<std::size_t>(i)]);
    es.vectors.col(i) = q.col(order[static_cast<std::size_t>(i)]);
  }

  Matrix diag = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag(i, i) = std::polar(1.0, es.phases(i));
  }
  const double reconstruction = (u - es.vectors * diag * es.vectors.adjoint()).norm();
  if (reconstruction > 1e-7) {
    throw InternalError("eig_unitary: reconstruction residual " +
                        std::to_string(reconstruction));
  }
  return es;
}

}  // namespace spansim
