#pragma once

#include <string>
#include <vector>

#include "numeric.hpp"
#include "qpe.hpp"

namespace testutil {

using spansim::Complex;
using spansim::Matrix;
using spansim::Rng;
using spansim::Vector;

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
  }
  return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return v;
}

inline Vector random_unit_vector(Rng& rng, Eigen::Index dim) {
  Vector v = random_vector(rng, dim);
  return v / v.norm();
}

// Haar-ish random unitary via QR of a random complex matrix.
inline Matrix random_unitary(Rng& rng, Eigen::Index dim) {
  const Matrix m = random_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  return q;
}

// Random rank-r orthogonal projector.
inline Matrix random_projector(Rng& rng, Eigen::Index dim, Eigen::Index rank) {
  if (rank == 0) return Matrix::Zero(dim, dim);
  const Matrix q = random_unitary(rng, dim).leftCols(rank);
  return q * q.adjoint();
}

}  // namespace testutil
