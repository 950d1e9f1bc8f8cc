#include <goflab/ghl.hpp>
#include <goflab/hl.hpp>
#include <goflab/logistic.hpp>
#include <goflab/simulate.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace goflab {

void validate(const Scenario& s) {
  auto fail = [](const std::string& msg) { throw Error(Errc::domain, msg); };
  if (s.n < 1) fail("n must be positive");
  if (s.m < 1 || s.m > s.n) fail("m must lie in 1..n");
  if (s.n % s.m != 0)
    fail("m = " + std::to_string(s.m) + " does not divide n = " +
         std::to_string(s.n));
  if (s.d < 2) fail("d must be at least 2");
  if (s.d > s.n) fail("d must not exceed n");
  if (s.G < 3) fail("G must be at least 3");
  if (s.m < s.G) fail("m must be at least G");
  if (!(s.sigma2_e >= 0.0)) fail("sigma2_e must be non-negative");
  if (!(s.sigma2 > 0.0)) fail("sigma2 must be positive");
  if (s.reps < 2) fail("reps must be at least 2");
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) fail("alpha must lie in (0, 1)");
}

VectorXd true_beta(int d) {
  if (d < 2)
    throw Error(Errc::domain, "true_beta: d must be at least 2, got " +
                                  std::to_string(d));
  VectorXd beta = VectorXd::Constant(d, 0.535 / std::sqrt(double(d - 1)));
  beta(0) = 0.1;
  return beta;
}

Dataset generate_dataset(const Scenario& s, std::uint64_t index) {
  StreamRng base(s.seed, index, StreamPurpose::covariates);
  StreamRng noise(s.seed, index, StreamPurpose::noise);
  StreamRng resp(s.seed, index, StreamPurpose::responses);
  Dataset data;
  data.X = gen_covariates(s, base, noise);
  data.y = gen_responses(data.X, true_beta(s.d), resp);
  for (int j = 1; j < s.d; ++j) data.names.push_back("x" + std::to_string(j));
  return data;
}

Realization run_realization(const Scenario& s, std::uint64_t index) {
  Realization r;
  try {
    const Dataset data = generate_dataset(s, index);
    const auto model = fit_logistic(data.X, data.y);
    StreamRng rng(s.seed, index, StreamPurpose::grouping);
    const auto grouping = make_grouping(model, s.G, s.grouping_method, rng);

    const auto hl = hl_test(model, data.y, grouping);
    const auto central = central_matrix(model, data.X, grouping);
    const auto ghl = ghl_from_parts(residual_vector(model, data.y, grouping),
                                    central);
    r.hl_statistic = hl.statistic;
    r.hl_p = hl.p_value;
    r.ghl_statistic = ghl.statistic;
    r.ghl_p = ghl.p_value;
    r.ghl_df = ghl.df;
    r.sigma_diag_mean = central.sigma.diagonal().mean();
    r.ok = true;
  } catch (const Error& e) {
    r.failure = e.code();
  }
  return r;
}

SimSummary summarize_realizations(const Scenario& s,
                                  const std::vector<Realization>& records) {
  SimSummary out;
  out.scenario = s;
  std::vector<double> hl_stat, hl_p, ghl_stat, ghl_p;
  double diag = 0.0;
  double df = 0.0;
  for (const auto& r : records) {
    if (!r.ok) {
      ++out.failures;
      ++out.failure_reasons[r.failure.value_or(Errc::simulation_failed)];
      continue;
    }
    hl_stat.push_back(r.hl_statistic);
    hl_p.push_back(r.hl_p);
    ghl_stat.push_back(r.ghl_statistic);
    ghl_p.push_back(r.ghl_p);
    diag += r.sigma_diag_mean;
    df += r.ghl_df;
  }
  out.reps_used = static_cast<long>(hl_stat.size());
  if (out.reps_used < 2)
    throw Error(Errc::simulation_failed,
                std::to_string(out.failures) + " of " +
                    std::to_string(records.size()) + " realizations failed");
  out.hl = mc_summary(hl_stat, hl_p, s.alpha);
  out.ghl = mc_summary(ghl_stat, ghl_p, s.alpha);
  out.mean_sigma_diag = diag / static_cast<double>(out.reps_used);
  out.mean_ghl_df = df / static_cast<double>(out.reps_used);
  return out;
}

namespace {

struct Task {
  std::size_t cell;
  int rep;
};

}  // namespace

std::vector<SimSummary> run_grid(const std::vector<Scenario>& scenarios,
                                 int workers) {
  std::vector<std::vector<Realization>> records(scenarios.size());
  std::vector<std::optional<std::string>> errors(scenarios.size());
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < scenarios.size(); ++c) {
    try {
      validate(scenarios[c]);
    } catch (const Error& e) {
      errors[c] = e.what();
      continue;
    }
    records[c].resize(static_cast<std::size_t>(scenarios[c].reps));
    for (int r = 0; r < scenarios[c].reps; ++r) tasks.push_back({c, r});
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> crashes(scenarios.size());
  std::vector<std::atomic<bool>> crashed(scenarios.size());
  auto work = [&] {
    constexpr std::size_t chunk = 16;
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= tasks.size()) return;
      const std::size_t end = std::min(tasks.size(), begin + chunk);
      for (std::size_t t = begin; t < end; ++t) {
        const auto [c, r] = tasks[t];
        if (crashed[c].load()) continue;
        try {
          records[c][static_cast<std::size_t>(r)] =
              run_realization(scenarios[c], static_cast<std::uint64_t>(r));
        } catch (...) {
          if (!crashed[c].exchange(true)) crashes[c] = std::current_exception();
        }
      }
    }
  };

  const int threads = std::max(1, workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::vector<SimSummary> out(scenarios.size());
  for (std::size_t c = 0; c < scenarios.size(); ++c) {
    out[c].scenario = scenarios[c];
    if (errors[c]) {
      out[c].error = errors[c];
      continue;
    }
    try {
      if (crashes[c]) std::rethrow_exception(crashes[c]);
      out[c] = summarize_realizations(scenarios[c], records[c]);
    } catch (const std::exception& e) {
      out[c].error = e.what();
      for (const auto& r : records[c])
        if (!r.ok) {
          ++out[c].failures;
          ++out[c].failure_reasons[r.failure.value_or(Errc::simulation_failed)];
        }
    }
  }
  return out;
}

SimSummary run_scenario(const Scenario& s, int workers) {
  validate(s);
  auto out = run_grid({s}, workers);
  if (out.front().error)
    throw Error(Errc::simulation_failed, *out.front().error);
  return out.front();
}

}  // namespace goflab
