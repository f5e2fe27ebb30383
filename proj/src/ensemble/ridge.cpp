#include <Eigen/Dense>

#include "anxpipe/ensemble/learners.hpp"
#include "anxpipe/error.hpp"

namespace anxpipe::learn {

RidgeSolution solve_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const RidgeConfig& config) {
  if (X.rows() != y01.size()) throw DataError("ridge: row count does not match labels");
  if (X.rows() == 0) throw DataError("ridge: empty design");
  if (config.lambda < 0) throw DataError("ridge: lambda must be >= 0");
  const Eigen::VectorXd t = 2.0 * y01.array() - 1.0;
  const Eigen::RowVectorXd mu = X.colwise().mean();
  const double t_mean = t.mean();
  const Eigen::MatrixXd Zc = X.rowwise() - mu;
  const Eigen::VectorXd tc = t.array() - t_mean;

  const Eigen::MatrixXd A =
      Zc.transpose() * Zc + config.lambda * Eigen::MatrixXd::Identity(X.cols(), X.cols());
  const Eigen::VectorXd rhs = Zc.transpose() * tc;
  Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(rhs);

  RidgeSolution out;
  out.model.weights = w;
  out.model.intercept = t_mean - mu.dot(w);
  out.normal_equation_residual = (A * w - rhs).cwiseAbs().maxCoeff();
  return out;
}

LinearModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const RidgeConfig& config) {
  return solve_ridge(X, y01, config).model;
}

}  // namespace anxpipe::learn
