#pragma once

#include <goflab/simulate.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace goflab::cli {

/// Simulation grid read from a flat `key = value` file. Lists are comma
/// separated; `#` starts a comment.
///
/// Keys: n, m_list, d_min, d_max, d_list, G, sigma2_e_list, reps, alpha,
/// seed, grouping_method (quantile | balanced). `d_list`, when present,
/// replaces the d_min..d_max range.
struct GridConfig {
  int n = 500;
  std::vector<int> m_list{500};
  int d_min = 2;
  int d_max = 2;
  std::vector<int> d_list;
  int G = 10;
  std::vector<double> sigma2_e_list{0.0};
  int reps = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  GroupingMethod grouping_method = GroupingMethod::balanced;
};

/// Throws Errc::invalid_config listing every unknown key and bad value.
GridConfig parse_config(const std::string& text);
GridConfig load_config(const std::filesystem::path& path);

/// Cells ordered by m, then sigma2_e, then d. Every cell shares the master
/// seed, so cells differing only in one parameter reuse the same random
/// streams.
std::vector<Scenario> expand(const GridConfig& config);

}  // namespace goflab::cli
