#include <goflab/stats.hpp>
#include <goflab/types.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace goflab {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 10000;
constexpr double kZ95 = 1.96;

}  // namespace

namespace detail {

double gamma_p_series(double a, double x) {
  if (x <= 0.0) return 0.0;
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x))
    throw Error(Errc::domain, "gamma_q requires a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

double chi2_sf(double x, int df) {
  if (df < 1)
    throw Error(Errc::domain,
                "chi2_sf: degrees of freedom must be >= 1, got " +
                    std::to_string(df));
  if (!(x >= 0.0))
    throw Error(Errc::domain, "chi2_sf: statistic must be >= 0");
  return gamma_q(0.5 * df, 0.5 * x);
}

McSummary mc_summary(std::span<const double> statistics,
                     std::span<const double> p_values, double alpha) {
  const auto N = statistics.size();
  if (N != p_values.size())
    throw Error(Errc::domain, "mc_summary: statistics and p-values differ in length");
  if (N < 2) throw Error(Errc::domain, "mc_summary: need at least 2 realizations");

  McSummary s;
  s.reps = static_cast<long>(N);
  s.alpha = alpha;
  const double n = static_cast<double>(N);

  double sum = 0.0;
  for (double v : statistics) sum += v;
  s.mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : statistics) {
    const double c = v - s.mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  s.variance = m2 / (n - 1.0);
  for (double p : p_values)
    if (p < alpha) ++s.rejections;
  s.rejection_rate = static_cast<double>(s.rejections) / n;

  const double mean_hw = kZ95 * std::sqrt(s.variance / n);
  s.mean_ci = {s.mean - mean_hw, s.mean + mean_hw};

  // Var(s^2) ~ (mu4 - sigma^4 (N - 3) / (N - 1)) / N
  const double mu4 = m4 / n;
  const double var_of_var = std::max(
      0.0, (mu4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n);
  const double var_hw = kZ95 * std::sqrt(var_of_var);
  s.variance_ci = {s.variance - var_hw, s.variance + var_hw};

  const double p = s.rejection_rate;
  const double rej_hw = kZ95 * std::sqrt(p * (1.0 - p) / n);
  s.rejection_ci = {p - rej_hw, p + rej_hw};
  return s;
}

}  // namespace goflab
