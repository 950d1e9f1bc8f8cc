#pragma once

#include <goflab/grouping.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace goflab::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitInput = 2;

enum class MethodChoice { hl, ghl, both };

struct TestOptions {
  std::filesystem::path data;
  int G = 10;
  GroupingMethod grouping = GroupingMethod::balanced;
  MethodChoice method = MethodChoice::both;
  std::optional<std::uint64_t> seed;
  char delimiter = ',';
  std::string response = "y";
  std::optional<std::filesystem::path> out;  ///< result rows as CSV
};

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  int workers = 1;
  bool long_format = false;
  std::optional<std::uint64_t> seed;  ///< overrides the config's seed
};

struct PlotCommandOptions {
  std::filesystem::path results;
  std::filesystem::path outdir;
  std::optional<std::filesystem::path> data;  ///< raw data for a scatter
  double alpha = 0.05;
};

struct AdviseOptions {
  long n = 0;
  long m = 0;
  long d = 0;
  long very_large_n = 10000;
};

struct GenerateOptions {
  int n = 500;
  int m = 500;
  int d = 2;
  double sigma2_e = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t realization = 0;
  std::filesystem::path out;
};

int cmd_test(const TestOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotCommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_advise(const AdviseOptions& opts, std::ostream& out, std::ostream& err);
int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace goflab::cli
