#pragma once

#include <goflab/types.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <limits>

namespace goflab {

template <typename Scalar = double>
struct PseudoInverse {
  Matrix<Scalar> pinv;
  int rank = 0;
  Vector<Scalar> singular_values;
  Scalar cutoff = Scalar(0);
};

/// Singular values at or below max(size * eps * sigma_max, 1e-12) count as
/// zero.
template <typename Scalar>
Scalar rank_cutoff(Eigen::Index size, Scalar largest_singular_value) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  return std::max(Scalar(size) * eps * largest_singular_value, Scalar(1e-12));
}

/// Moore-Penrose pseudoinverse of a symmetric matrix via SVD. Rejects
/// inputs whose asymmetry exceeds `symmetry_tolerance`.
template <typename Derived>
PseudoInverse<typename Derived::Scalar> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& A,
    typename Derived::Scalar symmetry_tolerance = 1e-8) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() != A.cols())
    throw Error(Errc::non_symmetric, "pseudo_inverse: matrix is not square");
  if (A.size() > 0 &&
      (A - A.transpose()).cwiseAbs().maxCoeff() > symmetry_tolerance)
    throw Error(Errc::non_symmetric, "pseudo_inverse: matrix is not symmetric");

  PseudoInverse<Scalar> out;
  const auto G = A.rows();
  if (G == 0) {
    out.pinv.resize(0, 0);
    return out;
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  out.cutoff = rank_cutoff(G, out.singular_values(0));

  Vector<Scalar> inv = Vector<Scalar>::Zero(G);
  for (Eigen::Index i = 0; i < G; ++i) {
    if (out.singular_values(i) > out.cutoff) {
      inv(i) = Scalar(1) / out.singular_values(i);
      ++out.rank;
    }
  }
  out.pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  // Symmetric input has a symmetric pseudoinverse; remove SVD round-off.
  out.pinv = (out.pinv + out.pinv.transpose()) / Scalar(2);
  return out;
}

}  // namespace goflab
