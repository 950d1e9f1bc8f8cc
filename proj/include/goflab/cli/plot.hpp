#pragma once

#include <goflab/cli/results.hpp>
#include <goflab/dataset.hpp>

#include <filesystem>
#include <vector>

namespace goflab::cli {

struct PlotOptions {
  double alpha = 0.05;
  /// Half-width of the guide band drawn around alpha on rejection plots.
  double alpha_band = 0.005;
};

/// Writes one SVG per (panel, metric) for metrics mean, var and rejection,
/// each showing HL and GHL against d with 95% bands, plus `plot_data.csv`
/// holding the plotted values in tidy form. A panel is a distinct
/// (n, m, G, sigma2_e) combination; only the fields that vary across the
/// results appear in file names. Returns the SVG paths in write order.
std::vector<std::filesystem::path> plot_results(const std::vector<ResultRow>& rows,
                                                const std::filesystem::path& outdir,
                                                const PlotOptions& options = {});

/// Scatter of the first two covariates (columns 1 and 2 of X).
void plot_covariate_scatter(const Dataset& data, const std::filesystem::path& path);

}  // namespace goflab::cli
