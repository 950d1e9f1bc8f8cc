#pragma once

#include <goflab/dataset.hpp>
#include <goflab/grouping.hpp>
#include <goflab/hl.hpp>
#include <goflab/logistic.hpp>
#include <goflab/pinv.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace goflab {

/// Grouped residuals s_g = n^{-1/2} sum_{i in g} (y_i - pi_i).
template <typename Scalar = double>
struct GroupedResidualVector {
  Vector<Scalar> s;
};

/// Estimated covariance of the grouped residuals, with its rank and
/// pseudoinverse.
template <typename Scalar = double>
struct CentralMatrix {
  Matrix<Scalar> sigma;
  int rank = 0;
  Matrix<Scalar> pinv;
};

template <typename Scalar, typename DerivedY>
GroupedResidualVector<Scalar> residual_vector(const FittedModel<Scalar>& model,
                                              const Eigen::MatrixBase<DerivedY>& y,
                                              const Grouping<Scalar>& grouping) {
  using std::sqrt;
  const auto n = y.size();
  if (model.fitted.size() != n || grouping.assignment.size() != n)
    throw Error(Errc::domain, "residual_vector: inconsistent lengths");
  GroupedResidualVector<Scalar> r;
  r.s = Vector<Scalar>::Zero(grouping.G);
  for (Eigen::Index i = 0; i < n; ++i)
    r.s(grouping.assignment(i)) += y(i) - model.fitted(i);
  r.s /= sqrt(Scalar(n));
  return r;
}

/// Sigma = (1/n) G* (V - V X (X'VX)^{-1} X'V) G*' for rows with variance
/// weights `v` and group labels `assignment`. Rows may be single Bernoulli
/// trials or binomial aggregates whose weight already carries the trial
/// count; `n` is the total number of trials either way.
///
/// Evaluated as (1/n) (D - C C') with D = diag(sum_{i in g} v_i) and
/// C = (G* V X) L^{-T}, where L L' = X'VX. The result is symmetric by
/// construction.
template <typename DerivedX, typename DerivedV>
Matrix<typename DerivedX::Scalar> central_matrix_weighted(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedV>& v,
    const Labels& assignment, int G, typename DerivedX::Scalar n) {
  using Scalar = typename DerivedX::Scalar;
  const auto rows = X.rows();
  const auto d = X.cols();

  Matrix<Scalar> grouped_vx = Matrix<Scalar>::Zero(G, d);  // G* V X
  Vector<Scalar> group_weight = Vector<Scalar>::Zero(G);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto g = assignment(i);
    grouped_vx.row(g) += v(i) * X.row(i);
    group_weight(g) += v(i);
  }

  const Matrix<Scalar> info = X.transpose() * v.asDiagonal() * X;
  Eigen::LLT<Matrix<Scalar>> llt(info);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::rank_deficient, "X'VX is not positive definite");
  // C' = L^{-1} (G* V X)'
  const Matrix<Scalar> ct =
      llt.matrixL().solve(grouped_vx.transpose());

  Matrix<Scalar> sigma = -ct.transpose() * ct;
  sigma.diagonal() += group_weight;
  return sigma / n;
}

template <typename Scalar>
CentralMatrix<Scalar> central_matrix_from(Matrix<Scalar> sigma) {
  CentralMatrix<Scalar> c;
  auto p = pseudo_inverse(sigma);
  c.sigma = std::move(sigma);
  c.rank = p.rank;
  c.pinv = std::move(p.pinv);
  return c;
}

template <typename DerivedX, typename Scalar>
CentralMatrix<Scalar> central_matrix(const FittedModel<Scalar>& model,
                                     const Eigen::MatrixBase<DerivedX>& X,
                                     const Grouping<Scalar>& grouping) {
  if (model.weights.size() != X.rows() ||
      grouping.assignment.size() != X.rows())
    throw Error(Errc::domain, "central_matrix: inconsistent lengths");
  return central_matrix_from<Scalar>(central_matrix_weighted(
      X, model.weights, grouping.assignment, grouping.G, Scalar(X.rows())));
}

inline CentralMatrix<double> central_matrix(const FittedModel<double>& model,
                                            const Dataset& data,
                                            const Grouping<double>& grouping) {
  return central_matrix(model, data.X, grouping);
}

/// Same matrix assembled from binomially aggregated data: one row per
/// distinct covariate pattern with weight t_e pi_e (1 - pi_e).
Matrix<double> central_matrix_aggregated(const FittedModel<double>& model,
                                         const Dataset& data,
                                         const Grouping<double>& grouping);

/// s' Sigma^+ s referred to chi-squared with rank(Sigma) degrees of freedom.
template <typename Scalar>
TestResult<Scalar> ghl_from_parts(const GroupedResidualVector<Scalar>& residuals,
                                  const CentralMatrix<Scalar>& central) {
  if (central.rank < 1)
    throw Error(Errc::degenerate_test,
                "central matrix is numerically zero (rank 0)");
  TestResult<Scalar> r;
  r.method = TestMethod::ghl;
  r.G = static_cast<int>(residuals.s.size());
  const Scalar q = residuals.s.dot(central.pinv * residuals.s);
  // A PSD pseudoinverse can only give a negative form through round-off.
  r.statistic = q > Scalar(0) ? q : Scalar(0);
  r.df = central.rank;
  r.p_value = chi2_sf(static_cast<double>(r.statistic), r.df);
  return r;
}

template <typename Scalar, typename DerivedX, typename DerivedY>
TestResult<Scalar> ghl_test(const FittedModel<Scalar>& model,
                            const Eigen::MatrixBase<DerivedX>& X,
                            const Eigen::MatrixBase<DerivedY>& y,
                            const Grouping<Scalar>& grouping) {
  auto r = ghl_from_parts(residual_vector(model, y, grouping),
                          central_matrix(model, X, grouping));
  r.groups = summarize_groups(grouping, y, model.fitted);
  return r;
}

inline TestResult<double> ghl_test(const FittedModel<double>& model,
                                   const Dataset& data,
                                   const Grouping<double>& grouping) {
  return ghl_test(model, data.X, data.y, grouping);
}

}  // namespace goflab
