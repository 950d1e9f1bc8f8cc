#pragma once

#include <goflab/types.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace goflab {

/// Binary-response regression data. Column 0 of `X` is the intercept.
struct Dataset {
  VectorXd y;
  MatrixXd X;
  /// Covariate names, excluding the intercept.
  std::vector<std::string> names;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index d() const { return X.cols(); }
};

/// Throws Errc::domain if `data` breaks any of the Dataset invariants
/// (binary y, matching shapes, unit first column, n >= d >= 1, finite).
void validate(const Dataset& data);

/// Builds and validates a dataset from responses and covariates. The
/// intercept column is prepended to `covariates`.
Dataset make_dataset(VectorXd y, const MatrixXd& covariates,
                     std::vector<std::string> names = {});

enum class InterceptMode {
  automatic,  ///< prepend unless the first covariate column is all ones
  always,
  never,
};

struct LoadOptions {
  char delimiter = ',';
  std::string response = "y";
  InterceptMode intercept = InterceptMode::automatic;
};

Dataset load_dataset(const std::filesystem::path& path,
                     const LoadOptions& options = {});

/// Writes `data` as CSV (response first, intercept omitted) with enough
/// digits that load_dataset reproduces every value exactly.
void save_dataset(const std::filesystem::path& path, const Dataset& data,
                  char delimiter = ',');

struct EvpSummary {
  Eigen::Index m = 0;
  double replication_ratio = 0.0;
  /// Per-EVP trial and success counts, in order of first appearance.
  std::vector<long> trials;
  std::vector<long> successes;
  /// Row index of the first occurrence of each EVP.
  std::vector<Eigen::Index> representative;
  /// EVP index of every observation.
  std::vector<Eigen::Index> evp_of_row;
};

/// Groups rows with bitwise-identical covariates (explanatory variable
/// patterns). Near-replicates are never merged.
EvpSummary aggregate_evps(const Dataset& data);

}  // namespace goflab
