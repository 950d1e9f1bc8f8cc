#pragma once

#include <goflab/logistic.hpp>
#include <goflab/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace goflab {

/// Partition of observations into G intervals of the linear predictor.
/// Observation i belongs to group g (0-based) iff
/// endpoints[g] < eta_i <= endpoints[g + 1].
template <typename Scalar = double>
struct Grouping {
  Vector<Scalar> endpoints;  ///< G + 1 values, -inf first and +inf last
  Labels assignment;         ///< group of each observation, in 0..G-1
  int G = 0;
};

template <typename Scalar = double>
struct GroupSummary {
  Vector<Scalar> observed;  ///< O_g
  Vector<Scalar> expected;  ///< E_g
  Vector<Scalar> size;      ///< n_g
  Vector<Scalar> pi_bar;    ///< E_g / n_g

  int G() const { return static_cast<int>(observed.size()); }
};

enum class GroupingMethod { quantile, balanced };

/// Indices 0..n-1 stably sorted by (eta, original index).
template <typename Derived>
std::vector<Eigen::Index> order_by_eta(const Eigen::MatrixBase<Derived>& eta) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(eta.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return eta(a) < eta(b); });
  return order;
}

/// Applies the interval indicator to every observation.
template <typename DerivedE, typename DerivedK>
Labels assign_from_endpoints(const Eigen::MatrixBase<DerivedE>& eta,
                             const Eigen::MatrixBase<DerivedK>& endpoints) {
  const auto G = endpoints.size() - 1;
  Labels out(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    // First interior endpoint >= eta_i.
    Eigen::Index g = 0;
    while (g < G - 1 && eta(i) > endpoints(g + 1)) ++g;
    out(i) = static_cast<int>(g);
  }
  return out;
}

namespace detail {

template <typename Scalar>
void require_nonempty_groups(const Labels& assignment, int G) {
  std::vector<int> counts(static_cast<std::size_t>(G), 0);
  for (Eigen::Index i = 0; i < assignment.size(); ++i)
    ++counts[static_cast<std::size_t>(assignment(i))];
  for (int g = 0; g < G; ++g)
    if (counts[static_cast<std::size_t>(g)] == 0)
      throw Error(Errc::degenerate_grouping,
                  "group " + std::to_string(g + 1) + " of " +
                      std::to_string(G) + " is empty");
}

template <typename Scalar>
Eigen::Index count_distinct(const Vector<Scalar>& eta,
                            const std::vector<Eigen::Index>& order) {
  Eigen::Index distinct = order.empty() ? 0 : 1;
  for (std::size_t r = 1; r < order.size(); ++r)
    if (eta(order[r]) != eta(order[r - 1])) ++distinct;
  return distinct;
}

template <typename Scalar>
void check_group_count(int G, Eigen::Index distinct) {
  if (G < 2)
    throw Error(Errc::domain, "need at least 2 groups, got " +
                                  std::to_string(G));
  if (distinct < G)
    throw Error(Errc::degenerate_grouping,
                std::to_string(distinct) + " distinct fitted values for " +
                    std::to_string(G) + " groups");
}

}  // namespace detail

/// Deciles-of-risk style grouping. The j-th interior endpoint is the linear
/// predictor of the ceil(j n / G)-th smallest fitted value (the right-
/// continuous inverse of the empirical CDF at j / G).
template <typename Scalar>
Grouping<Scalar> group_by_quantiles(const FittedModel<Scalar>& model, int G) {
  const Vector<Scalar>& eta = model.eta;
  const auto n = eta.size();
  const auto order = order_by_eta(eta);
  detail::check_group_count<Scalar>(G, detail::count_distinct(eta, order));

  Grouping<Scalar> out;
  out.G = G;
  out.endpoints.resize(G + 1);
  out.endpoints(0) = -std::numeric_limits<Scalar>::infinity();
  out.endpoints(G) = std::numeric_limits<Scalar>::infinity();
  for (int j = 1; j < G; ++j) {
    const Eigen::Index rank = (j * n + G - 1) / G;  // 1-based
    out.endpoints(j) = eta(order[static_cast<std::size_t>(rank - 1)]);
    if (!(out.endpoints(j) > out.endpoints(j - 1)))
      throw Error(Errc::degenerate_grouping,
                  "tied fitted values collapse quantile endpoints " +
                      std::to_string(j - 1) + " and " + std::to_string(j));
  }
  out.assignment = assign_from_endpoints(eta, out.endpoints);
  detail::require_nonempty_groups<Scalar>(out.assignment, G);
  return out;
}

/// Groups of roughly equal total variance weight sum pi(1 - pi).
///
/// Observations are sorted by eta and tied values merged into blocks. For
/// each target g W / G the cut is placed at the block boundary whose
/// cumulative weight is nearest the target, constrained so that every group
/// keeps at least one block. The endpoint itself is drawn uniformly between
/// the two eta values straddling the cut.
template <typename Scalar, typename Rng>
Grouping<Scalar> group_by_balanced_variance(const FittedModel<Scalar>& model,
                                            int G, Rng& rng) {
  const Vector<Scalar>& eta = model.eta;
  const auto order = order_by_eta(eta);

  std::vector<Scalar> block_eta;
  std::vector<Scalar> cumulative;  // weight up to and including each block
  Scalar total(0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto i = order[r];
    if (r == 0 || eta(i) != block_eta.back()) {
      block_eta.push_back(eta(i));
      cumulative.push_back(total);
    }
    total += model.weights(i);
    cumulative.back() = total;
  }
  const auto blocks = static_cast<Eigen::Index>(block_eta.size());
  detail::check_group_count<Scalar>(G, blocks);
  if (!(total > Scalar(0)))
    throw Error(Errc::degenerate_grouping, "total variance weight is zero");

  Grouping<Scalar> out;
  out.G = G;
  out.endpoints.resize(G + 1);
  out.endpoints(0) = -std::numeric_limits<Scalar>::infinity();
  out.endpoints(G) = std::numeric_limits<Scalar>::infinity();

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // Boundary b (1..blocks-1) cuts between block b-1 and block b.
  Eigen::Index previous = 0;
  for (int g = 1; g < G; ++g) {
    const Scalar target = total * Scalar(g) / Scalar(G);
    auto it = std::lower_bound(cumulative.begin(), cumulative.end() - 1, target);
    auto b = static_cast<Eigen::Index>(it - cumulative.begin()) + 1;
    if (b > 1 && b - 1 < blocks &&
        std::abs(cumulative[static_cast<std::size_t>(b - 2)] - target) <=
            std::abs(cumulative[static_cast<std::size_t>(b - 1)] - target))
      --b;
    b = std::clamp(b, previous + 1, blocks - (G - g));
    previous = b;

    const Scalar lo = block_eta[static_cast<std::size_t>(b - 1)];
    const Scalar hi = block_eta[static_cast<std::size_t>(b)];
    Scalar k = lo + Scalar(unif(rng)) * (hi - lo);
    if (!(k < hi) || !(k >= lo)) k = lo + (hi - lo) / Scalar(2);
    out.endpoints(g) = k;
  }
  out.assignment = assign_from_endpoints(eta, out.endpoints);
  detail::require_nonempty_groups<Scalar>(out.assignment, G);
  return out;
}

template <typename Scalar, typename Rng>
Grouping<Scalar> make_grouping(const FittedModel<Scalar>& model, int G,
                               GroupingMethod method, Rng& rng) {
  if (method == GroupingMethod::quantile) return group_by_quantiles(model, G);
  return group_by_balanced_variance(model, G, rng);
}

template <typename Scalar, typename DerivedY, typename DerivedP>
GroupSummary<Scalar> summarize_groups(const Grouping<Scalar>& grouping,
                                      const Eigen::MatrixBase<DerivedY>& y,
                                      const Eigen::MatrixBase<DerivedP>& fitted) {
  const auto n = grouping.assignment.size();
  if (y.size() != n || fitted.size() != n)
    throw Error(Errc::domain, "grouping, response and fitted lengths differ");
  GroupSummary<Scalar> s;
  s.observed = Vector<Scalar>::Zero(grouping.G);
  s.expected = Vector<Scalar>::Zero(grouping.G);
  s.size = Vector<Scalar>::Zero(grouping.G);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto g = grouping.assignment(i);
    s.observed(g) += y(i);
    s.expected(g) += fitted(i);
    s.size(g) += Scalar(1);
  }
  for (int g = 0; g < grouping.G; ++g)
    if (s.size(g) == Scalar(0))
      throw Error(Errc::degenerate_grouping,
                  "group " + std::to_string(g + 1) + " is empty");
  s.pi_bar = s.expected.cwiseQuotient(s.size);
  return s;
}

}  // namespace goflab
