#include "ebrm/numerics.hpp"

#include <cmath>

namespace ebrm {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// Penalized log-likelihood and, on request, its gradient and negative Hessian.
// Rows with zero trials contribute nothing, so the pass is fully vectorized.
struct Objective {
  const GroupedBinaryData& data;
  double ridge;

  struct Point {
    double log_likelihood = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
  };

  Point evaluate(const Eigen::VectorXd& theta, bool derivatives) const {
    const Eigen::MatrixXd& x = *data.rows;
    const auto rows = x.rows();
    const Eigen::Map<const Eigen::ArrayXd> n(data.trials.data(), rows);
    const Eigen::Map<const Eigen::ArrayXd> y(data.successes.data(), rows);
    const Eigen::ArrayXd z = (x * theta).array();
    // One exp per row: softplus(z) = max(z, 0) + log1p(e), sigmoid from e, e = exp(-|z|).
    const Eigen::ArrayXd e = (-z.abs()).exp();
    const Eigen::ArrayXd soft = z.max(0.0) + (1.0 + e).log();

    Point out;
    out.log_likelihood = (y * z - n * soft).sum() - 0.5 * ridge * theta.squaredNorm();
    if (!derivatives) return out;
    const Eigen::ArrayXd p = (z >= 0.0).select(1.0 / (1.0 + e), e / (1.0 + e));
    const Eigen::VectorXd residual = (y - n * p).matrix();
    out.gradient.noalias() = x.transpose() * residual;
    out.gradient -= ridge * theta;
    const Eigen::ArrayXd w = n * p * (1.0 - p);
    const Eigen::MatrixXd weighted = x.array().colwise() * w;
    out.hessian.noalias() = weighted.transpose() * x;
    out.hessian.diagonal().array() += ridge;
    return out;
  }
};

}  // namespace

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw NumericsError("cholesky: matrix is not square");
  const Eigen::Index d = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) throw NumericsError("not positive definite");
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_cov,
                           RandomStream& rng) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + chol_cov.triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd sherman_morrison_inplace(Eigen::MatrixXd& g_inv, const Eigen::VectorXd& x,
                                         double& denominator) {
  Eigen::VectorXd u = g_inv * x;
  denominator = 1.0 + x.dot(u);
  g_inv.noalias() -= (u * u.transpose()) / denominator;
  return u;
}

Eigen::MatrixXd sherman_morrison_update(const Eigen::MatrixXd& g_inv, const Eigen::VectorXd& x) {
  Eigen::MatrixXd out = g_inv;
  double denom = 0.0;
  sherman_morrison_inplace(out, x, denom);
  return out;
}

IrlsResult irls_logistic(const GroupedBinaryData& data, std::size_t dim, double ridge, double tol,
                         int max_iter, const Eigen::VectorXd* warm_start) {
  if (!(tol > 0.0)) throw std::invalid_argument("irls_logistic: tol must be positive");
  if (!(ridge >= 0.0)) throw std::invalid_argument("irls_logistic: ridge must be non-negative");
  if (!data.rows || static_cast<std::size_t>(data.rows->cols()) != dim ||
      data.trials.size() != static_cast<std::size_t>(data.rows->rows()) ||
      data.successes.size() != data.trials.size())
    throw std::invalid_argument("irls_logistic: inconsistent grouped data");
  const Objective obj{data, ridge};
  const auto d = static_cast<Eigen::Index>(dim);

  IrlsResult result;
  result.theta = warm_start ? *warm_start : Eigen::VectorXd::Zero(d);
  Objective::Point current = obj.evaluate(result.theta, true);
  result.objective_path.push_back(current.log_likelihood);

  while (current.gradient.lpNorm<Eigen::Infinity>() >= tol) {
    if (result.iterations >= max_iter) throw NumericsError("no convergence");
    ++result.iterations;
    Eigen::LLT<Eigen::MatrixXd> llt(current.hessian);
    if (llt.info() != Eigen::Success) throw NumericsError("degenerate Hessian");
    const Eigen::VectorXd step = llt.solve(current.gradient);

    // Step halving keeps the penalized likelihood non-decreasing.
    const double slack = 1e-12 * (1.0 + std::abs(current.log_likelihood));
    double scale = 1.0;
    Eigen::VectorXd candidate = result.theta + step;
    Objective::Point next = obj.evaluate(candidate, true);
    for (int halvings = 0; next.log_likelihood < current.log_likelihood - slack && halvings < 60;
         ++halvings) {
      scale *= 0.5;
      candidate = result.theta + scale * step;
      next = obj.evaluate(candidate, false);
    }
    if (next.log_likelihood < current.log_likelihood - slack) throw NumericsError("no convergence");
    if (scale != 1.0) next = obj.evaluate(candidate, true);
    result.theta = std::move(candidate);
    current = std::move(next);
    result.objective_path.push_back(current.log_likelihood);
  }
  result.hessian = std::move(current.hessian);
  return result;
}

IrlsResult irls_logistic(const std::vector<Eigen::VectorXd>& xs, const std::vector<int>& ys,
                         double ridge, double tol, int max_iter) {
  if (xs.size() != ys.size()) throw std::invalid_argument("irls_logistic: length mismatch");
  if (xs.empty()) {
    if (!(ridge > 0.0)) throw std::invalid_argument("irls_logistic: empty data needs ridge > 0");
  }
  const std::size_t dim = xs.empty() ? 1 : static_cast<std::size_t>(xs.front().size());
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(dim));
  std::vector<double> trials(xs.size(), 1.0), successes(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (static_cast<std::size_t>(xs[i].size()) != dim)
      throw std::invalid_argument("irls_logistic: inconsistent dimensions");
    rows.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
    successes[i] = ys[i];
  }
  return irls_logistic(GroupedBinaryData{&rows, trials, successes}, dim, ridge, tol, max_iter);
}

}  // namespace ebrm
