#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "ebrm/core.hpp"

namespace ebrm {

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lower-triangular L with L * L^T = A. Throws NumericsError("not positive
// definite") on a non-positive pivot. Only the lower triangle of A is read.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& a);

// mean + chol_cov * z with z i.i.d. standard normal.
Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_cov,
                           RandomStream& rng);

// (G + x x^T)^-1 given G^-1.
Eigen::MatrixXd sherman_morrison_update(const Eigen::MatrixXd& g_inv, const Eigen::VectorXd& x);

// In-place variant; returns G^-1 x computed before the update (the rank-one
// direction), which callers use to refresh cached quadratic forms.
Eigen::VectorXd sherman_morrison_inplace(Eigen::MatrixXd& g_inv, const Eigen::VectorXd& x,
                                         double& denominator);

struct IrlsResult {
  Eigen::VectorXd theta;
  // ridge * I + sum_j w_j sigmoid'(x_j^T theta) x_j x_j^T at the returned theta.
  Eigen::MatrixXd hessian;
  int iterations = 0;
  // Penalized log-likelihood at the start point and after each iteration.
  std::vector<double> objective_path;
};

// Observations grouped by distinct design row: row j of `rows` was observed
// `trials[j]` times with `successes[j]` ones. Rows with zero trials are skipped.
struct GroupedBinaryData {
  const Eigen::MatrixXd* rows = nullptr;
  std::span<const double> trials;
  std::span<const double> successes;
};

// Ridge-penalized logistic MLE by Newton/IRLS with step halving. Converged
// when || sum (y - sigmoid(x^T theta)) x - ridge * theta ||_inf < tol. Throws
// NumericsError("no convergence") after max_iter iterations.
IrlsResult irls_logistic(const std::vector<Eigen::VectorXd>& xs, const std::vector<int>& ys,
                         double ridge, double tol, int max_iter);

IrlsResult irls_logistic(const GroupedBinaryData& data, std::size_t dim, double ridge, double tol,
                         int max_iter, const Eigen::VectorXd* warm_start = nullptr);

double sigmoid(double z);

}  // namespace ebrm
