#include <goflab/cli/advise.hpp>
#include <goflab/cli/commands.hpp>
#include <goflab/cli/config.hpp>
#include <goflab/cli/plot.hpp>
#include <goflab/cli/results.hpp>
#include <goflab/dataset.hpp>
#include <goflab/simulate.hpp>

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace goflab;
using namespace goflab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "goflab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc config_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected parse_config to throw");
  return Errc::domain;
}

/// Results text for the full d x m grid with plausible made-up numbers.
std::string synthetic_main_grid() {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (int m : {50, 100, 500})
    for (int d = 2; d <= 25; ++d)
      for (const char* method : {"HL", "GHL"})
        out << "500," << m << ',' << d << ",10,0,2000,0," << method << ",8.1,16.2,0.05,7.9,8.3,"
            << "0.04,0.06,1\n";
  return out.str();
}

int run_binary(const std::string& args) {
  const char* exe = std::getenv("GOFLAB_CLI");
  REQUIRE(exe != nullptr);
  const int status = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("advise reaches all four verdicts") {
  CHECK(advise(500, 50, 10).verdict == Verdict::use_ghl_or_both);
  CHECK(advise(100, 20, 20).verdict == Verdict::both_with_caution);
  CHECK(advise(500, 500, 5).verdict == Verdict::use_hl);
  CHECK(advise(100000, 100000, 10, 10000).verdict == Verdict::use_ghl);
  // Large model without clustering.
  CHECK(advise(100, 100, 20).verdict == Verdict::use_hl);

  const auto rec = advise(500, 50, 10);
  CHECK(rec.inputs.small_model);
  CHECK(rec.inputs.clustering);
  CHECK(!rec.inputs.very_large_n);
  CHECK(!rec.rationale.empty());
  CHECK(std::string(to_string(Verdict::use_ghl_or_both)) == "USE_GHL_OR_BOTH");
  CHECK(std::string(to_string(Verdict::both_with_caution)) == "BOTH_WITH_CAUTION");

  bool extrapolated = false;
  for (const auto& line : advise(100000, 1000, 30).rationale)
    extrapolated |= line.find("extrapolat") != std::string::npos;
  CHECK(extrapolated);

  CHECK_THROWS_AS(advise(10, 20, 2), Error);
  CHECK_THROWS_AS(advise(10, 5, 0), Error);
}

TEST_CASE("advise is total over a grid of inputs") {
  for (long n : {10L, 100L, 1000L, 20000L})
    for (long m : {1L, 5L, 10L, 100L, 1000L, 20000L})
      for (long d : {1L, 2L, 10L, 30L}) {
        if (m > n) continue;
        const auto a = advise(n, m, d);
        const auto b = advise(n, m, d);
        CHECK(a.verdict == b.verdict);
      }
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(
      "# main grid\n"
      "n = 500\n"
      "m_list = 50, 100, 500\n"
      "d_min = 2\n"
      "d_max = 25\n"
      "G = 10\n"
      "sigma2_e_list = 0\n"
      "reps = 2000\n"
      "alpha = 0.05\n"
      "seed = 12345\n"
      "grouping_method = balanced\n");
  CHECK(cfg.m_list == std::vector<int>{50, 100, 500});
  CHECK(cfg.seed == 12345u);
  const auto cells = expand(cfg);
  CHECK(cells.size() == 72);
  CHECK(cells.front().m == 50);
  CHECK(cells.front().d == 2);
  CHECK(cells.back().m == 500);
  CHECK(cells.back().d == 25);
  for (const auto& c : cells) CHECK(c.seed == 12345u);

  const auto listed = parse_config("m_list = 50\nd_list = 2, 25\nsigma2_e_list = 0, 0.01\n");
  CHECK(expand(listed).size() == 4);
}

TEST_CASE("config errors list every unknown key") {
  std::string msg;
  CHECK(config_error("n = 500\nbogus = 1\nalso_bogus = 2\n", &msg) == Errc::invalid_config);
  CHECK(msg.find("bogus") != std::string::npos);
  CHECK(msg.find("also_bogus") != std::string::npos);
  CHECK(config_error("reps = many\n") == Errc::invalid_config);
  CHECK(config_error("m_list = 30\n") == Errc::invalid_config);
  CHECK(config_error("grouping_method = random\n") == Errc::invalid_config);
  CHECK(config_error("just a line\n") == Errc::invalid_config);
}

TEST_CASE("results header is stable") {
  CHECK(kResultsHeader ==
        "n,m,d,G,sigma2_e,reps,failures,method,mean,var,rejection,"
        "mean_ci_lo,mean_ci_hi,rej_ci_lo,rej_ci_hi,seed");
}

TEST_CASE("simulate smoke run") {
  const auto dir = scratch("simulate");
  std::ofstream(dir / "grid.cfg") << "n = 100\nm_list = 100\nd_min = 2\nd_max = 3\nreps = 2\nseed = 5\n";
  SimulateOptions opts;
  opts.config = dir / "grid.cfg";
  opts.out = dir / "results.csv";
  std::ostringstream out, err;
  CHECK(cmd_simulate(opts, out, err) == kExitOk);
  const auto text = slurp(opts.out);
  CHECK(text.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
  const auto rows = read_results(opts.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].method == "HL");
  CHECK(rows[1].method == "GHL");
  CHECK(rows[0].reps == 2);
  CHECK(rows[0].failures == 0);
  CHECK(rows[2].d == 3);
  CHECK(rows[0].seed == "5");

  opts.long_format = true;
  opts.out = dir / "long.csv";
  CHECK(cmd_simulate(opts, out, err) == kExitOk);
  const auto long_rows = read_results(opts.out);
  REQUIRE(long_rows.size() == 4);
  CHECK(long_rows[0].has_var_ci);

  std::ofstream(dir / "bad.cfg") << "n = 100\nwhat = 1\n";
  opts.config = dir / "bad.cfg";
  CHECK(cmd_simulate(opts, out, err) == kExitInput);
  CHECK(err.str().find("what") != std::string::npos);
}

TEST_CASE("plot writes nine charts for the main grid") {
  const auto dir = scratch("plot");
  std::ofstream(dir / "results.csv") << synthetic_main_grid();
  PlotCommandOptions opts;
  opts.results = dir / "results.csv";
  opts.outdir = dir / "plots";
  std::ostringstream out, err;
  REQUIRE(cmd_plot(opts, out, err) == kExitOk);
  int svgs = 0;
  for (const auto& entry : fs::directory_iterator(opts.outdir))
    svgs += entry.path().extension() == ".svg";
  CHECK(svgs == 9);
  CHECK(fs::exists(opts.outdir / "plot_data.csv"));
  const auto rejection = slurp(opts.outdir / "rejection_m50.svg");
  CHECK(rejection.find("alpha") != std::string::npos);
  CHECK(rejection.find("0.045") != std::string::npos);
  CHECK(rejection.find("0.055") != std::string::npos);
}

TEST_CASE("plot of an empty results file fails without writing") {
  const auto dir = scratch("plot_empty");
  std::ofstream(dir / "empty.csv") << "";
  std::ofstream(dir / "header_only.csv") << kResultsHeader << '\n';
  std::ofstream(dir / "wrong.csv") << "a,b,c\n1,2,3\n";
  for (const char* name : {"empty.csv", "header_only.csv", "wrong.csv"}) {
    PlotCommandOptions opts;
    opts.results = dir / name;
    opts.outdir = dir / "plots";
    std::ostringstream out, err;
    CHECK(cmd_plot(opts, out, err) == kExitInput);
    CHECK(!fs::exists(opts.outdir));
  }
}

TEST_CASE("test command") {
  const auto dir = scratch("test_cmd");
  Scenario s;
  s.d = 3;
  save_dataset(dir / "data.csv", generate_dataset(s, 0));

  TestOptions opts;
  opts.data = dir / "data.csv";
  opts.seed = 7;
  opts.method = MethodChoice::hl;
  opts.out = dir / "hl.csv";
  std::ostringstream out, err;
  REQUIRE(cmd_test(opts, out, err) == kExitOk);
  CHECK(slurp(*opts.out).find("HL,10,") != std::string::npos);
  CHECK(slurp(*opts.out).find(",8,") != std::string::npos);

  opts.method = MethodChoice::both;
  opts.out = dir / "both_a.csv";
  REQUIRE(cmd_test(opts, out, err) == kExitOk);
  opts.out = dir / "both_b.csv";
  REQUIRE(cmd_test(opts, out, err) == kExitOk);
  CHECK(slurp(dir / "both_a.csv") == slurp(dir / "both_b.csv"));
  CHECK(slurp(dir / "both_a.csv").find("GHL,10,") != std::string::npos);

  std::ofstream(dir / "broken.csv") << "y,x1\n1,0.5\n0,0.1\n1,zzz\n";
  opts.data = dir / "broken.csv";
  std::ostringstream err2;
  CHECK(cmd_test(opts, out, err2) == kExitInput);
  CHECK(err2.str().find("row 4") != std::string::npos);

  // Separation is a computational failure, not an input error.
  std::ofstream(dir / "separated.csv") << "y,x1\n0,-3\n0,-2\n0,-1\n1,1\n1,2\n1,3\n";
  opts.data = dir / "separated.csv";
  opts.G = 3;
  CHECK(cmd_test(opts, out, err) == kExitComputation);
}

TEST_CASE("advise command output") {
  AdviseOptions opts;
  opts.n = 500;
  opts.m = 50;
  opts.d = 10;
  std::ostringstream out, err;
  CHECK(cmd_advise(opts, out, err) == kExitOk);
  CHECK(out.str().rfind("USE_GHL_OR_BOTH\n", 0) == 0);
}

TEST_CASE("gof-lab binary exit codes") {
  if (!std::getenv("GOFLAB_CLI")) return;
  const auto dir = scratch("binary");
  CHECK(run_binary("advise --n 500 --m 500 --d 5") == 0);
  CHECK(run_binary("advise --n 5") == 2);
  CHECK(run_binary("frobnicate") == 2);
  CHECK(run_binary("test --data " + (dir / "missing.csv").string()) == 2);
  CHECK(run_binary("generate --n 200 --m 100 --d 3 --seed 4 --out " +
                   (dir / "g.csv").string()) == 0);
  CHECK(run_binary("--seed 3 test --data " + (dir / "g.csv").string() +
                   " --G 10 --grouping balanced --method both") == 0);
}
