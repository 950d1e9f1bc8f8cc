#include <goflab/ghl.hpp>

namespace goflab {

Matrix<double> central_matrix_aggregated(const FittedModel<double>& model,
                                         const Dataset& data,
                                         const Grouping<double>& grouping) {
  const auto evps = aggregate_evps(data);
  const auto m = evps.m;
  MatrixXd X(m, data.d());
  VectorXd v(m);
  Labels assignment(m);
  for (Eigen::Index e = 0; e < m; ++e) {
    const auto i = evps.representative[static_cast<std::size_t>(e)];
    X.row(e) = data.X.row(i);
    v(e) = static_cast<double>(evps.trials[static_cast<std::size_t>(e)]) *
           model.weights(i);
    assignment(e) = grouping.assignment(i);
  }
  return central_matrix_weighted(X, v, assignment, grouping.G,
                                 static_cast<double>(data.n()));
}

}  // namespace goflab
