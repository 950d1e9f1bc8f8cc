#pragma once

#include <goflab/dataset.hpp>
#include <goflab/grouping.hpp>
#include <goflab/logistic.hpp>
#include <goflab/rng.hpp>
#include <goflab/stats.hpp>
#include <goflab/types.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace goflab {

/// One cell of a null-distribution study.
struct Scenario {
  int n = 500;
  int m = 500;  ///< distinct covariate patterns; must divide n
  int d = 2;    ///< parameters including the intercept
  int G = 10;
  double sigma2_e = 0.0;  ///< near-replicate noise variance
  double sigma2 = 1.0;    ///< marginal variance of the base patterns
  int reps = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  GroupingMethod grouping_method = GroupingMethod::balanced;
};

/// Throws Errc::domain naming the first violated constraint.
void validate(const Scenario& s);

/// Intercept 0.1 and slopes 0.535 / sqrt(d - 1).
VectorXd true_beta(int d);

/// n x d design: m base patterns from N(0, sigma2 I), each repeated n / m
/// times (consecutive rows), plus independent N(0, sigma2_e I) noise per
/// row, with the intercept column first. Base patterns come from `base_rng`
/// and the noise from `noise_rng`.
template <typename Rng>
MatrixXd gen_covariates(const Scenario& s, Rng& base_rng, Rng& noise_rng) {
  const int p = s.d - 1;
  const int per = s.n / s.m;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(s.sigma2);
  MatrixXd base(s.m, p);
  for (int e = 0; e < s.m; ++e)
    for (int j = 0; j < p; ++j) base(e, j) = sd * normal(base_rng);

  MatrixXd X(s.n, s.d);
  X.col(0).setOnes();
  for (int e = 0; e < s.m; ++e)
    X.block(e * per, 1, per, p).rowwise() = base.row(e);
  if (s.sigma2_e > 0.0) {
    std::normal_distribution<double> noise(0.0, 1.0);
    const double sd_e = std::sqrt(s.sigma2_e);
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < p; ++j) X(i, j + 1) += sd_e * noise(noise_rng);
  }
  return X;
}

/// Independent Bernoulli(inverse_logit(x_i' beta)) draws, y_i = [u_i < pi_i].
template <typename Rng>
VectorXd gen_responses(const MatrixXd& X, const VectorXd& beta, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const VectorXd eta = X * beta;
  VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    y(i) = unif(rng) < inverse_logit(eta(i)) ? 1.0 : 0.0;
  }
  return y;
}

/// Dataset for realization `index`, drawn from its own substreams.
Dataset generate_dataset(const Scenario& s, std::uint64_t index);

struct Realization {
  bool ok = false;
  std::optional<Errc> failure;
  double hl_statistic = 0.0;
  double hl_p = 1.0;
  double ghl_statistic = 0.0;
  double ghl_p = 1.0;
  int ghl_df = 0;
  double sigma_diag_mean = 0.0;
};

/// Generate, fit, group, and run both tests on the same grouping.
Realization run_realization(const Scenario& s, std::uint64_t index);

struct SimSummary {
  Scenario scenario;
  McSummary hl;
  McSummary ghl;
  double mean_sigma_diag = 0.0;
  double mean_ghl_df = 0.0;
  long reps_used = 0;
  long failures = 0;
  std::map<Errc, long> failure_reasons;
  /// Set when the cell could not be summarized; the other fields are then
  /// meaningless.
  std::optional<std::string> error;
};

/// Summarizes realization records in index order.
SimSummary summarize_realizations(const Scenario& s,
                                  const std::vector<Realization>& records);

/// Runs every realization of one cell. Throws Errc::simulation_failed if
/// fewer than two realizations succeed.
SimSummary run_scenario(const Scenario& s, int workers = 1);

/// Runs all cells with up to `workers` threads. A failing cell is reported
/// through SimSummary::error and never stops the others. The output does
/// not depend on `workers`.
std::vector<SimSummary> run_grid(const std::vector<Scenario>& scenarios,
                                 int workers = 1);

}  // namespace goflab
