#pragma once

#include <goflab/dataset.hpp>
#include <goflab/grouping.hpp>
#include <goflab/logistic.hpp>
#include <goflab/stats.hpp>

#include <string>

namespace goflab {

enum class TestMethod { hl, ghl };

inline const char* to_string(TestMethod m) {
  return m == TestMethod::hl ? "HL" : "GHL";
}

template <typename Scalar = double>
struct TestResult {
  Scalar statistic = Scalar(0);
  int df = 0;
  double p_value = 1.0;
  TestMethod method = TestMethod::hl;
  GroupSummary<Scalar> groups;
  int G = 0;
};

/// Smallest admissible pi_bar (1 - pi_bar) in any group.
inline constexpr double kMinGroupVariance = 1e-10;

/// Hosmer-Lemeshow statistic sum_g (O_g - E_g)^2 / (n_g pi_g (1 - pi_g)).
template <typename Scalar>
Scalar hl_statistic(const GroupSummary<Scalar>& s) {
  Scalar stat(0);
  for (int g = 0; g < s.G(); ++g) {
    const Scalar v = s.pi_bar(g) * (Scalar(1) - s.pi_bar(g));
    if (!(s.size(g) >= Scalar(1)) || !(v >= Scalar(kMinGroupVariance)))
      throw Error(Errc::vanishing_denominator,
                  "group " + std::to_string(g + 1) +
                      " has vanishing variance pi_bar (1 - pi_bar)");
    const Scalar r = s.observed(g) - s.expected(g);
    stat += r * r / (s.size(g) * v);
  }
  return stat;
}

/// HL test referred to chi-squared with G - 2 degrees of freedom, whatever
/// the number of model parameters.
template <typename Scalar>
TestResult<Scalar> hl_test(const FittedModel<Scalar>& model,
                           const Vector<Scalar>& y,
                           const Grouping<Scalar>& grouping) {
  if (grouping.G <= 2)
    throw Error(Errc::domain, "HL test needs G > 2, got " +
                                  std::to_string(grouping.G));
  TestResult<Scalar> r;
  r.method = TestMethod::hl;
  r.G = grouping.G;
  r.groups = summarize_groups(grouping, y, model.fitted);
  r.statistic = hl_statistic(r.groups);
  r.df = grouping.G - 2;
  r.p_value = chi2_sf(static_cast<double>(r.statistic), r.df);
  return r;
}

inline TestResult<double> hl_test(const FittedModel<double>& model,
                                  const Dataset& data,
                                  const Grouping<double>& grouping) {
  return hl_test(model, data.y, grouping);
}

}  // namespace goflab
