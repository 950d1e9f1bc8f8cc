#include <goflab/cli/advise.hpp>
#include <goflab/cli/commands.hpp>
#include <goflab/cli/config.hpp>
#include <goflab/cli/plot.hpp>
#include <goflab/cli/results.hpp>
#include <goflab/dataset.hpp>
#include <goflab/ghl.hpp>
#include <goflab/hl.hpp>
#include <goflab/logistic.hpp>
#include <goflab/rng.hpp>
#include <goflab/simulate.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <vector>

namespace goflab::cli {

namespace {

int report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return is_input_error(e.code()) ? kExitInput : kExitComputation;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

}  // namespace

int cmd_test(const TestOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    LoadOptions load;
    load.delimiter = opts.delimiter;
    load.response = opts.response;
    const Dataset data = load_dataset(opts.data, load);
    const auto evps = aggregate_evps(data);
    const auto model = fit_logistic(data.X, data.y);

    const std::uint64_t seed = opts.seed.value_or(fresh_seed());
    StreamRng rng(seed, 0, StreamPurpose::grouping);
    const auto grouping = make_grouping(model, opts.G, opts.grouping, rng);

    std::vector<TestResult<double>> results;
    if (opts.method != MethodChoice::ghl)
      results.push_back(hl_test(model, data, grouping));
    if (opts.method != MethodChoice::hl)
      results.push_back(ghl_test(model, data, grouping));

    out << "data: " << opts.data.string() << "  n = " << data.n()
        << "  d = " << data.d() << "  distinct EVPs m = " << evps.m
        << "  n/m = " << fmt(evps.replication_ratio) << '\n';
    out << "fit: " << model.iterations << " iterations, score norm "
        << fmt(model.score_norm, "%.3g") << '\n';
    out << "grouping: "
        << (opts.grouping == GroupingMethod::balanced ? "balanced" : "quantile")
        << "  G = " << opts.G << "  seed = " << seed << "\n\n";
    out << "method  statistic     df  p_value\n";
    for (const auto& r : results) {
      char line[96];
      std::snprintf(line, sizeof line, "%-6s  %-12.6g  %2d  %.6g\n",
                    to_string(r.method), r.statistic, r.df, r.p_value);
      out << line;
    }
    const auto& groups = results.front().groups;
    out << "\ngroup     n_g       O_g         E_g   pi_bar\n";
    for (int g = 0; g < groups.G(); ++g) {
      char line[96];
      std::snprintf(line, sizeof line, "%5d  %6.0f  %8.0f  %10.4f  %7.4f\n",
                    g + 1, groups.size(g), groups.observed(g),
                    groups.expected(g), groups.pi_bar(g));
      out << line;
    }

    if (opts.out) {
      std::ofstream csv(*opts.out);
      if (!csv) throw Error(Errc::missing_file, "cannot write " + opts.out->string());
      csv << "method,G,statistic,df,p_value,seed\n";
      for (const auto& r : results)
        csv << to_string(r.method) << ',' << r.G << ',' << fmt(r.statistic, "%.17g")
            << ',' << r.df << ',' << fmt(r.p_value, "%.17g") << ',' << seed << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    auto config = load_config(opts.config);
    if (opts.seed) config.seed = *opts.seed;
    const auto scenarios = expand(config);
    out << "simulating " << scenarios.size() << " scenario(s) x " << config.reps
        << " realizations with " << opts.workers << " worker(s)\n";
    const auto cells = run_grid(scenarios, opts.workers);

    std::ofstream csv(opts.out);
    if (!csv) throw Error(Errc::missing_file, "cannot write " + opts.out.string());
    write_results(csv, cells, opts.long_format);

    int failed = 0;
    for (const auto& c : cells) {
      if (c.error) {
        ++failed;
        err << "scenario m=" << c.scenario.m << " d=" << c.scenario.d
            << " sigma2_e=" << c.scenario.sigma2_e << ": " << *c.error << '\n';
      } else if (c.failures > 0) {
        err << "scenario m=" << c.scenario.m << " d=" << c.scenario.d
            << ": " << c.failures << " realization(s) dropped (";
        bool first = true;
        for (const auto& [code, count] : c.failure_reasons) {
          err << (first ? "" : ", ") << to_string(code) << ": " << count;
          first = false;
        }
        err << ")\n";
      }
    }
    out << "wrote " << 2 * cells.size() << " rows to " << opts.out.string() << '\n';
    return failed ? kExitComputation : kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_plot(const PlotCommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto rows = read_results(opts.results);
    std::optional<Dataset> data;
    if (opts.data) data = load_dataset(*opts.data);
    PlotOptions plot;
    plot.alpha = opts.alpha;
    const auto files = plot_results(rows, opts.outdir, plot);
    for (const auto& f : files) out << f.string() << '\n';
    if (data) {
      const auto path = opts.outdir / "covariates_scatter.svg";
      plot_covariate_scatter(*data, path);
      out << path.string() << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int cmd_advise(const AdviseOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto rec = advise(opts.n, opts.m, opts.d, opts.very_large_n);
    out << to_string(rec.verdict) << '\n';
    for (const auto& line : rec.rationale) out << "  " << line << '\n';
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    Scenario s;
    s.n = opts.n;
    s.m = opts.m;
    s.d = opts.d;
    s.sigma2_e = opts.sigma2_e;
    s.seed = opts.seed;
    s.G = std::min(s.G, s.m);
    if (s.n % s.m != 0 || s.d < 2 || s.m < 1)
      throw Error(Errc::domain, "generate needs d >= 2 and m dividing n");
    const auto data = generate_dataset(s, opts.realization);
    save_dataset(opts.out, data);
    out << "wrote " << data.n() << " rows to " << opts.out.string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goodness-of-fit tests for logistic regression: Hosmer-Lemeshow "
               "(HL) and generalized Hosmer-Lemeshow (GHL)"};
  app.name("gof-lab");
  app.require_subcommand(1);
  std::optional<std::uint64_t> global_seed;
  app.add_option("--seed", global_seed, "Seed for every random choice");

  const std::map<std::string, GroupingMethod> groupings{
      {"balanced", GroupingMethod::balanced}, {"quantile", GroupingMethod::quantile}};
  const std::map<std::string, MethodChoice> methods{
      {"hl", MethodChoice::hl}, {"ghl", MethodChoice::ghl}, {"both", MethodChoice::both}};

  TestOptions test;
  std::string delimiter = ",";
  auto* t = app.add_subcommand("test", "Fit a logistic model and run HL and/or GHL");
  t->add_option("--data", test.data, "CSV with a header row and a 0/1 response")
      ->required();
  t->add_option("--G", test.G, "Number of groups")->check(CLI::Range(3, 1000));
  t->add_option("--grouping", test.grouping, "balanced | quantile")
      ->transform(CLI::CheckedTransformer(groupings, CLI::ignore_case));
  t->add_option("--method", test.method, "hl | ghl | both")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  t->add_option("--seed", test.seed, "Seed for the randomized group endpoints");
  t->add_option("--delimiter", delimiter, "Field delimiter");
  t->add_option("--response", test.response, "Name of the response column");
  t->add_option("--out", test.out, "Also write result rows to this CSV");

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Run a Monte Carlo grid from a config file");
  s->add_option("--config", sim.config, "key = value grid description")->required();
  s->add_option("--out", sim.out, "Results CSV")->required();
  s->add_option("--workers", sim.workers, "Worker threads")->check(CLI::Range(1, 1024));
  s->add_flag("--long", sim.long_format, "Append full-precision columns");
  s->add_option("--seed", sim.seed, "Override the config seed");

  PlotCommandOptions plot;
  auto* p = app.add_subcommand("plot", "Draw SVG charts from a results CSV");
  p->add_option("--results", plot.results, "Results CSV")->required();
  p->add_option("--outdir", plot.outdir, "Output directory")->required();
  p->add_option("--data", plot.data, "Dataset for a covariate scatter plot");
  p->add_option("--alpha", plot.alpha, "Reference level on rejection plots");

  AdviseOptions adv;
  auto* a = app.add_subcommand("advise", "Recommend HL, GHL or both");
  a->add_option("--n", adv.n, "Sample size")->required();
  a->add_option("--m", adv.m, "Distinct covariate patterns or estimated clusters")
      ->required();
  a->add_option("--d", adv.d, "Number of model parameters")->required();
  a->add_option("--very-large-n", adv.very_large_n, "Threshold for 'very large n'");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write one simulated dataset as CSV");
  g->add_option("--n", gen.n, "Sample size");
  g->add_option("--m", gen.m, "Distinct covariate patterns (must divide n)");
  g->add_option("--d", gen.d, "Parameters including the intercept");
  g->add_option("--sigma2-e", gen.sigma2_e, "Near-replicate noise variance");
  g->add_option("--realization", gen.realization, "Realization index");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out", gen.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*t) {
    if (delimiter.size() != 1) {
      err << "error: --delimiter must be a single character\n";
      return kExitInput;
    }
    test.delimiter = delimiter[0];
    if (!test.seed) test.seed = global_seed;
    return cmd_test(test, out, err);
  }
  if (*s) {
    if (!sim.seed) sim.seed = global_seed;
    return cmd_simulate(sim, out, err);
  }
  if (*p) return cmd_plot(plot, out, err);
  if (*a) return cmd_advise(adv, out, err);
  if (*g) {
    if (global_seed && g->count("--seed") == 0) gen.seed = *global_seed;
    return cmd_generate(gen, out, err);
  }
  return kExitInput;
}

}  // namespace goflab::cli
