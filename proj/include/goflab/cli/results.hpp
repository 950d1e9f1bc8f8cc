#pragma once

#include <goflab/simulate.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace goflab::cli {

/// Column order of the results file. Changing it breaks downstream readers.
inline constexpr std::string_view kResultsHeader =
    "n,m,d,G,sigma2_e,reps,failures,method,mean,var,rejection,"
    "mean_ci_lo,mean_ci_hi,rej_ci_lo,rej_ci_hi,seed";

/// Extra columns appended in long format.
inline constexpr std::string_view kLongColumns =
    "mean_full,var_full,rejection_full,var_ci_lo,var_ci_hi,"
    "mean_sigma_diag,mean_df,grouping,error";

/// One row per cell and test (HL first, then GHL); numbers carry 6
/// significant digits, or full precision in the long columns.
void write_results(std::ostream& out, const std::vector<SimSummary>& cells,
                   bool long_format = false);

struct ResultRow {
  int n = 0;
  int m = 0;
  int d = 0;
  int G = 0;
  double sigma2_e = 0.0;
  int reps = 0;
  int failures = 0;
  std::string method;
  double mean = 0.0;
  double var = 0.0;
  double rejection = 0.0;
  double mean_ci_lo = 0.0;
  double mean_ci_hi = 0.0;
  double rej_ci_lo = 0.0;
  double rej_ci_hi = 0.0;
  std::string seed;
  bool has_var_ci = false;
  double var_ci_lo = 0.0;
  double var_ci_hi = 0.0;
};

/// Parses a results file in short or long format. Throws Errc::schema when
/// the header does not start with kResultsHeader or a row is malformed.
std::vector<ResultRow> read_results(const std::filesystem::path& path);

}  // namespace goflab::cli
