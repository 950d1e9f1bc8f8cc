#pragma once

#include <goflab/types.hpp>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace goflab {

/// Logistic function exp(t) / (1 + exp(t)). The argument is clamped to
/// +-700 and evaluated on the side that cannot overflow.
template <typename Scalar>
Scalar inverse_logit(Scalar t) {
  using std::exp;
  const Scalar limit(700);
  t = std::clamp(t, -limit, limit);
  if (t >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-t));
  const Scalar e = exp(t);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
Scalar logit(Scalar p) {
  using std::log;
  return log(p / (Scalar(1) - p));
}

template <typename DerivedB, typename DerivedX>
typename DerivedB::Scalar predict_prob(const Eigen::MatrixBase<DerivedB>& beta,
                                       const Eigen::MatrixBase<DerivedX>& x) {
  return inverse_logit(beta.dot(x));
}

template <typename Scalar = double>
struct FitOptions {
  Scalar score_tolerance = Scalar(1e-8);
  int max_iterations = 100;
  int max_halvings = 20;
  /// |eta| beyond which a still-moving fit is treated as separated.
  Scalar separation_eta = Scalar(30);
  /// Called with (iteration, log-likelihood) at the start and after every
  /// accepted step.
  std::function<void(int, Scalar)> trace;
};

template <typename Scalar = double>
struct FittedModel {
  Vector<Scalar> beta;
  Vector<Scalar> fitted;
  Vector<Scalar> eta;
  Vector<Scalar> weights;
  bool converged = false;
  int iterations = 0;
  Scalar score_norm = Scalar(0);
};

namespace detail {

template <typename Scalar>
Scalar log_likelihood(const Vector<Scalar>& y, const Vector<Scalar>& eta) {
  using std::exp;
  using std::log1p;
  // y*eta - log(1 + exp(eta)), written to stay finite for large |eta|.
  Scalar ll(0);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Scalar t = eta(i);
    const Scalar softplus =
        t > Scalar(0) ? t + log1p(exp(-t)) : log1p(exp(t));
    ll += y(i) * t - softplus;
  }
  return ll;
}

template <typename Scalar>
void evaluate(const Matrix<Scalar>& X, const Vector<Scalar>& beta,
              FittedModel<Scalar>& fit) {
  fit.eta = X * beta;
  fit.fitted = fit.eta.unaryExpr([](Scalar t) { return inverse_logit(t); });
  fit.weights = fit.fitted.array() * (Scalar(1) - fit.fitted.array());
}

}  // namespace detail

/// Maximum-likelihood logistic regression by Newton-Raphson (IRLS) with
/// step-halving. Throws Errc::rank_deficient when X lacks full column rank,
/// Errc::separation when coefficients diverge with fitted values pinned at
/// 0 or 1, and Errc::no_convergence when the iteration budget runs out.
template <typename DerivedX, typename DerivedY>
FittedModel<typename DerivedX::Scalar> fit_logistic(
    const Eigen::MatrixBase<DerivedX>& X_in,
    const Eigen::MatrixBase<DerivedY>& y_in,
    const FitOptions<typename DerivedX::Scalar>& opts = {}) {
  using Scalar = typename DerivedX::Scalar;
  using std::abs;
  const Matrix<Scalar> X = X_in;
  const Vector<Scalar> y = y_in;
  const auto d = X.cols();

  if (X.rows() < d)
    throw Error(Errc::too_few_rows, "fewer observations than parameters");
  {
    Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X);
    if (qr.rank() < d)
      throw Error(Errc::rank_deficient,
                  "design matrix has rank " + std::to_string(qr.rank()) +
                      " < " + std::to_string(d));
  }

  FittedModel<Scalar> fit;
  Vector<Scalar> beta = Vector<Scalar>::Zero(d);
  // Start from the logit of the mean response when the intercept is first.
  const Scalar ybar = y.mean();
  if (ybar > Scalar(0) && ybar < Scalar(1) && (X.col(0).array() == 1).all())
    beta(0) = logit(ybar);
  detail::evaluate(X, beta, fit);
  Scalar ll = detail::log_likelihood(y, fit.eta);
  if (opts.trace) opts.trace(0, ll);
  Scalar last_step = std::numeric_limits<Scalar>::infinity();

  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    fit.iterations = iter;
    const Vector<Scalar> score = X.transpose() * (y - fit.fitted);
    fit.score_norm = score.template lpNorm<Eigen::Infinity>();
    const Scalar max_eta = fit.eta.template lpNorm<Eigen::Infinity>();
    const Scalar step_tol =
        Scalar(1e-6) * (Scalar(1) + beta.template lpNorm<Eigen::Infinity>());

    // Under separation the score also tends to zero, but the coefficients
    // keep moving by O(1) per step; a genuine optimum has a vanishing step.
    if (fit.score_norm <= opts.score_tolerance &&
        (iter == 0 || last_step <= step_tol)) {
      fit.beta = beta;
      fit.converged = true;
      return fit;
    }
    if (max_eta > opts.separation_eta && last_step > step_tol && iter > 0)
      throw Error(Errc::separation,
                  "fitted probabilities pinned at 0 or 1 (max |eta| = " +
                      std::to_string(static_cast<double>(max_eta)) + ")");
    if (iter == opts.max_iterations) break;

    const Matrix<Scalar> info =
        X.transpose() * fit.weights.asDiagonal() * X;
    Eigen::LDLT<Matrix<Scalar>> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      if (max_eta > opts.separation_eta)
        throw Error(Errc::separation, "information matrix singular with "
                                      "fitted probabilities pinned at 0 or 1");
      throw Error(Errc::rank_deficient, "information matrix is singular");
    }
    const Vector<Scalar> step = ldlt.solve(score);

    // Near the optimum the gain in log-likelihood drops below the round-off
    // of its n-term sum; such steps are accepted.
    const Scalar slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                         Scalar(y.size()) * (Scalar(1) + abs(ll) / Scalar(y.size()));
    auto ascends = [&](Scalar value) { return value >= ll - slack; };

    Scalar scale(1);
    Vector<Scalar> candidate = beta + step;
    Vector<Scalar> eta = X * candidate;
    Scalar cand_ll = detail::log_likelihood(y, eta);
    for (int h = 0; h < opts.max_halvings && !ascends(cand_ll); ++h) {
      scale /= Scalar(2);
      candidate = beta + scale * step;
      eta = X * candidate;
      cand_ll = detail::log_likelihood(y, eta);
    }
    if (!ascends(cand_ll)) break;
    last_step = (scale * step).template lpNorm<Eigen::Infinity>();
    beta = candidate;
    ll = cand_ll;
    detail::evaluate(X, beta, fit);
    if (opts.trace) opts.trace(iter + 1, ll);
  }

  fit.beta = beta;
  fit.converged = false;
  if (fit.eta.template lpNorm<Eigen::Infinity>() > opts.separation_eta)
    throw Error(Errc::separation, "coefficients diverge; fitted "
                                  "probabilities pinned at 0 or 1");
  throw Error(Errc::no_convergence,
              "no convergence after " + std::to_string(fit.iterations) +
                  " iterations (score norm " +
                  std::to_string(static_cast<double>(fit.score_norm)) + ")");
}

}  // namespace goflab
