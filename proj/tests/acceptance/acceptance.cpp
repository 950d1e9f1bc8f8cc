// Acceptance suite. Runs every criterion at full size and prints one
// PASS/FAIL line each; the exit status is nonzero if any criterion fails.

#include <goflab/cli/advise.hpp>
#include <goflab/cli/commands.hpp>
#include <goflab/ghl.hpp>
#include <goflab/hl.hpp>
#include <goflab/simulate.hpp>
#include <goflab/stats.hpp>

#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace goflab;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240501;
constexpr int kReps = 2000;

int g_failed = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "\n"
            << "      " << detail << std::endl;
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario cell(int m, int d, int G = 10, double sigma2_e = 0.0) {
  Scenario s;
  s.n = 500;
  s.m = m;
  s.d = d;
  s.G = G;
  s.sigma2_e = sigma2_e;
  s.reps = kReps;
  s.alpha = 0.05;
  s.seed = kSeed;
  s.grouping_method = GroupingMethod::balanced;
  return s;
}

double half_width(const Interval& ci) { return (ci.hi - ci.lo) / 2; }

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<SimSummary> run(const std::vector<Scenario>& cells) {
  auto out = run_grid(cells, workers());
  for (const auto& c : out)
    if (c.error) {
      std::cout << "      cell m=" << c.scenario.m << " d=" << c.scenario.d
                << " failed: " << *c.error << "\n";
    }
  return out;
}

bool all_ok(const std::vector<SimSummary>& cells) {
  return std::none_of(cells.begin(), cells.end(), [](const auto& c) { return bool(c.error); });
}

// 1 ------------------------------------------------------------------------

void null_calibration() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = run({cell(500, 2), cell(500, 10)});
  const double per_cell = seconds_since(t0) / 2;
  bool ok = all_ok(cells) && per_cell <= 300.0;
  std::ostringstream detail;
  for (const auto& c : cells) {
    if (c.error) continue;
    const double hl = c.hl.rejection_rate, ghl = c.ghl.rejection_rate;
    ok &= hl >= 0.035 && hl <= 0.065 && ghl >= 0.035 && ghl <= 0.075;
    detail << "d=" << c.scenario.d << ": HL " << fmt("%.4f", hl) << ", GHL " << fmt("%.4f", ghl)
           << "; ";
  }
  detail << fmt("%.1f", per_cell) << " s per cell";
  report(1, "null calibration without replicates", ok, detail.str());
}

// 2, 3, 4 ------------------------------------------------------------------

void replication_criteria() {
  const std::vector<int> ds{2, 5, 10, 15, 20, 25};
  std::vector<Scenario> grid;
  for (int d : ds) grid.push_back(cell(50, d));
  grid.push_back(cell(100, 20));
  grid.push_back(cell(500, 20));
  const auto cells = run(grid);
  if (!all_ok(cells)) {
    report(2, "HL collapse under replication", false, "a cell failed");
    report(3, "replication-intensity ordering", false, "a cell failed");
    report(4, "GHL stability under replication", false, "a cell failed");
    return;
  }

  // 2
  {
    std::vector<double> dv, rej, mean, var;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      dv.push_back(ds[k]);
      rej.push_back(cells[k].hl.rejection_rate);
      mean.push_back(cells[k].hl.mean);
      var.push_back(cells[k].hl.variance);
    }
    const auto& lo = cells[0].hl;
    const auto& hi = cells[ds.size() - 1].hl;
    const double r_rej = spearman(dv, rej), r_mean = spearman(dv, mean), r_var = spearman(dv, var);
    const bool ok = hi.rejection_rate <= lo.rejection_rate - 0.02 && hi.mean < lo.mean &&
                    hi.variance < lo.variance && r_rej < 0 && r_mean < 0 && r_var < 0;
    std::ostringstream detail;
    detail << "d=2 -> d=25: rejection " << fmt("%.4f", lo.rejection_rate) << " -> "
           << fmt("%.4f", hi.rejection_rate) << ", mean " << fmt("%.3f", lo.mean) << " -> "
           << fmt("%.3f", hi.mean) << ", var " << fmt("%.3f", lo.variance) << " -> "
           << fmt("%.3f", hi.variance) << "; Spearman rej " << fmt("%.3f", r_rej) << ", mean "
           << fmt("%.3f", r_mean) << ", var " << fmt("%.3f", r_var);
    report(2, "HL collapse under replication", ok, detail.str());
  }

  // 3
  {
    const auto& m50 = cells[4].hl;  // d = 20
    const auto& m100 = cells[6].hl;
    const auto& m500 = cells[7].hl;
    const double tol1 = std::max(half_width(m50.rejection_ci), half_width(m100.rejection_ci));
    const double tol2 = std::max(half_width(m100.rejection_ci), half_width(m500.rejection_ci));
    const bool ok = m50.rejection_rate <= m100.rejection_rate + tol1 &&
                    m100.rejection_rate <= m500.rejection_rate + tol2;
    std::ostringstream detail;
    detail << "d=20 HL rejection: m=50 " << fmt("%.4f", m50.rejection_rate) << ", m=100 "
           << fmt("%.4f", m100.rejection_rate) << ", m=500 " << fmt("%.4f", m500.rejection_rate)
           << " (half-widths " << fmt("%.4f", tol1) << ", " << fmt("%.4f", tol2) << ")";
    report(3, "replication-intensity ordering", ok, detail.str());
  }

  // 4
  {
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const auto& g = cells[k].ghl;
      ok &= g.mean >= 8.5 && g.mean <= 9.5 && g.variance >= 15 && g.variance <= 21;
      detail << "d=" << ds[k] << " " << fmt("%.2f", g.mean) << "/" << fmt("%.1f", g.variance)
             << (k + 1 < ds.size() ? ", " : "");
    }
    report(4, "GHL stability under replication (mean/var)", ok, detail.str());
  }
}

// 5 ------------------------------------------------------------------------

void many_groups() {
  const auto cells = run({cell(50, 2, 26), cell(50, 25, 26)});
  bool ok = all_ok(cells);
  std::ostringstream detail;
  if (ok) {
    ok = cells[1].hl.rejection_rate < cells[0].hl.rejection_rate;
    detail << "G=26 HL rejection: d=2 " << fmt("%.4f", cells[0].hl.rejection_rate) << ", d=25 "
           << fmt("%.4f", cells[1].hl.rejection_rate);
  }
  report(5, "HL decline persists with G=26", ok, detail.str());
}

// 6 ------------------------------------------------------------------------

void clustering_noise() {
  const std::vector<double> noise{0.0, 0.001, 0.01, 0.1};
  std::vector<Scenario> grid;
  for (double s2 : noise) grid.push_back(cell(50, 25, 10, s2));
  const auto cells = run(grid);
  bool ok = all_ok(cells);
  std::ostringstream detail;
  if (ok) {
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
      const auto& a = cells[k];
      const auto& b = cells[k + 1];
      const double tol = std::max(half_width(a.hl.rejection_ci), half_width(b.hl.rejection_ci));
      ok &= b.hl.rejection_rate >= a.hl.rejection_rate - tol;
      ok &= b.mean_sigma_diag >= a.mean_sigma_diag;
    }
    detail << "HL rejection";
    for (const auto& c : cells) detail << " " << fmt("%.4f", c.hl.rejection_rate);
    detail << "; mean diag";
    for (const auto& c : cells) detail << " " << fmt("%.6f", c.mean_sigma_diag);
  }
  report(6, "clustering-noise sweep", ok, detail.str());
}

// 7 ------------------------------------------------------------------------

void structural_invariants() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(kSeed);
  double worst_sym = 0, worst_eig = 0, worst_row = 0, worst_sum = 0, worst_hl = 0, worst_ghl = 0,
         worst_mp = 0, worst_score = 0;
  for (int t = 0; t < 200; ++t) {
    auto inst = oracle::random_instance(gen, 60, 6, 6, t % 2 == 1);
    const auto& X = inst.data.X;
    const auto& y = inst.data.y;
    const int G = inst.grouping.G;

    const auto c = central_matrix(inst.model, inst.data, inst.grouping);
    worst_sym = std::max(worst_sym, (c.sigma - c.sigma.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(c.sigma);
    worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
    worst_row = std::max(worst_row, (c.sigma * VectorXd::Ones(G)).cwiseAbs().maxCoeff());

    const auto s = residual_vector(inst.model, y, inst.grouping);
    worst_sum = std::max(worst_sum, std::abs(s.s.sum()));

    const auto summary = summarize_groups(inst.grouping, y, inst.model.fitted);
    const VectorXd r = summary.observed - summary.expected;
    const VectorXd w =
        (summary.size.array() * summary.pi_bar.array() * (1 - summary.pi_bar.array())).inverse();
    worst_hl = std::max(worst_hl, std::abs(hl_statistic(summary) - r.dot(w.asDiagonal() * r)));

    const MatrixXd dense =
        oracle::sigma_first_form(X, inst.model.weights, inst.grouping.assignment, G);
    VectorXd s_dense = VectorXd::Zero(G);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      s_dense(inst.grouping.assignment(i)) += y(i) - inst.model.fitted(i);
    s_dense /= std::sqrt(double(X.rows()));
    Eigen::SelfAdjointEigenSolver<MatrixXd> des(dense);
    const double tol =
        std::max(G * 2.2e-16 * des.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
    const double ref = s_dense.dot(oracle::pinv_eigen(dense, tol) * s_dense);
    const auto ghl = ghl_from_parts(s, c);
    worst_ghl = std::max(worst_ghl, std::abs(ghl.statistic - ref) / std::max(1.0, ref));

    const MatrixXd& A = c.sigma;
    const MatrixXd& P = c.pinv;
    worst_mp = std::max({worst_mp, (A * P * A - A).cwiseAbs().maxCoeff(),
                         (P * A * P - P).cwiseAbs().maxCoeff(),
                         ((A * P).transpose() - A * P).cwiseAbs().maxCoeff(),
                         ((P * A).transpose() - P * A).cwiseAbs().maxCoeff()});

    const VectorXd score = X.transpose() * (y - inst.model.fitted);
    worst_score = std::max(worst_score, score.lpNorm<Eigen::Infinity>());
  }
  const double elapsed = seconds_since(t0);
  const bool ok = worst_sym <= 1e-10 && worst_eig >= -1e-8 && worst_row <= 1e-8 &&
                  worst_sum <= 1e-8 && worst_hl <= 1e-12 && worst_ghl <= 1e-10 &&
                  worst_mp <= 1e-8 && worst_score < 1e-6 && elapsed <= 60.0;
  std::ostringstream detail;
  detail << "200 instances, worst: asym " << fmt("%.1e", worst_sym) << ", min eig "
         << fmt("%.1e", worst_eig) << ", row sum " << fmt("%.1e", worst_row) << ", s sum "
         << fmt("%.1e", worst_sum) << ", HL " << fmt("%.1e", worst_hl) << ", GHL "
         << fmt("%.1e", worst_ghl) << ", MP " << fmt("%.1e", worst_mp) << ", score "
         << fmt("%.1e", worst_score) << "; " << fmt("%.2f", elapsed) << " s";
  report(7, "structural invariants", ok, detail.str());
}

// 8 ------------------------------------------------------------------------

void special_functions() {
  double worst = 0;
  for (int df : {2, 4, 8, 24})
    for (int k = 0; k <= 1000; ++k) {
      const double x = k * 0.1;
      worst = std::max(worst, std::abs(chi2_sf(x, df) - oracle::chi2_sf_even(x, df)));
    }
  const double p = chi2_sf(15.507, 8);
  const bool ok = worst <= 1e-10 && std::abs(p - 0.050) <= 0.001;
  report(8, "chi-squared tail", ok,
         "max even-df error " + fmt("%.2e", worst) + "; chi2_sf(15.507, 8) = " + fmt("%.6f", p));
}

// 9 ------------------------------------------------------------------------

void determinism() {
  const auto dir = fs::temp_directory_path() / "goflab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "grid.cfg") << "n = 500\n"
                                     "m_list = 50, 500\n"
                                     "d_list = 2, 10, 25\n"
                                     "sigma2_e_list = 0, 0.01\n"
                                     "G = 10\n"
                                     "reps = 200\n"
                                     "seed = "
                                  << kSeed << "\n";
  std::vector<std::string> files;
  bool ok = true;
  for (int w : {1, 4, 8}) {
    cli::SimulateOptions opts;
    opts.config = dir / "grid.cfg";
    opts.out = dir / ("results_w" + std::to_string(w) + ".csv");
    opts.workers = w;
    opts.long_format = true;
    std::ostringstream out, err;
    ok &= cli::cmd_simulate(opts, out, err) == cli::kExitOk;
    std::ifstream in(opts.out);
    std::stringstream ss;
    ss << in.rdbuf();
    files.push_back(ss.str());
  }
  ok &= files[0] == files[1] && files[0] == files[2] && !files[0].empty();
  const auto rows = std::count(files[0].begin(), files[0].end(), '\n') - 1;
  report(9, "determinism across worker counts", ok,
         std::to_string(rows) + " rows, identical for workers 1, 4, 8");
}

// 10 -----------------------------------------------------------------------

void advisor() {
  using cli::Verdict;
  struct Case {
    long n, m, d, threshold;
    Verdict expected;
  };
  const std::vector<Case> cases{
      {500, 50, 10, 10000, Verdict::use_ghl_or_both},
      {100, 20, 20, 10000, Verdict::both_with_caution},
      {500, 500, 5, 10000, Verdict::use_hl},
      {100000, 100000, 10, 10000, Verdict::use_ghl},
  };
  bool ok = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto v = cli::advise(c.n, c.m, c.d, c.threshold).verdict;
    ok &= v == c.expected;
    detail << "(" << c.n << "," << c.m << "," << c.d << ") " << cli::to_string(v) << " ";
  }
  report(10, "advisor verdicts", ok, detail.str());
}

}  // namespace

int main() {
  std::cout << "acceptance suite: reps = " << kReps << ", seed = " << kSeed << ", "
            << workers() << " worker(s)\n";
  const auto t0 = std::chrono::steady_clock::now();
  null_calibration();
  replication_criteria();
  many_groups();
  clustering_noise();
  structural_invariants();
  special_functions();
  determinism();
  advisor();
  std::cout << (g_failed ? "FAILED: " : "all criteria passed: ") << g_failed
            << " failure(s), " << fmt("%.1f", seconds_since(t0)) << " s total\n";
  return g_failed ? 1 : 0;
}
