#pragma once

#include <span>

namespace goflab {

/// Regularized upper incomplete gamma function Q(a, x).
double gamma_q(double a, double x);

namespace detail {
/// Lower regularized P(a, x) by its power series; accurate for x < a + 1.
double gamma_p_series(double a, double x);
/// Upper regularized Q(a, x) by Lentz's continued fraction; for x >= a + 1.
double gamma_q_continued_fraction(double a, double x);
}  // namespace detail

/// Upper tail P(X > x) of a chi-squared variable with `df` degrees of freedom.
double chi2_sf(double x, int df);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct McSummary {
  double mean = 0.0;
  double variance = 0.0;  ///< divisor N - 1
  double rejection_rate = 0.0;
  long rejections = 0;
  long reps = 0;
  double alpha = 0.05;
  Interval mean_ci;
  Interval variance_ci;
  Interval rejection_ci;
};

/// Mean, sample variance and rejection rate (p < alpha) of a Monte Carlo
/// sample, each with a normal-approximation 95% interval.
McSummary mc_summary(std::span<const double> statistics,
                     std::span<const double> p_values, double alpha);

}  // namespace goflab
