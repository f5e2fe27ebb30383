#include <cmath>

#include "anxpipe/ensemble/learners.hpp"
#include "anxpipe/error.hpp"

namespace anxpipe::learn {

LinearModel fit_linear_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const SvmConfig& config) {
  if (X.rows() != y01.size()) throw DataError("svm: row count does not match labels");
  if (X.rows() == 0) throw DataError("svm: empty design");
  const double n = static_cast<double>(X.rows());
  const Eigen::RowVectorXd mu = X.colwise().mean();
  Eigen::RowVectorXd sd = ((X.rowwise() - mu).array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < sd.size(); ++j)
    if (sd[j] < 1e-12) sd[j] = 1.0;
  const Eigen::MatrixXd Xz = (X.rowwise() - mu).array().rowwise() / sd.array();
  const Eigen::VectorXd t = 2.0 * y01.array() - 1.0;

  LinearModel m{Eigen::VectorXd::Zero(X.cols()), 0.0};
  LinearModel best = m;
  double best_obj = INFINITY;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const Eigen::VectorXd margin = t.array() * m.margins(Xz).array();
    double hinge = 0;
    Eigen::VectorXd grad_w = config.l2 * m.weights;
    double grad_b = 0;
    for (Eigen::Index i = 0; i < Xz.rows(); ++i) {
      if (margin[i] < 1.0) {
        hinge += 1.0 - margin[i];
        grad_w -= t[i] * Xz.row(i).transpose() / n;
        grad_b -= t[i] / n;
      }
    }
    const double obj = hinge / n + 0.5 * config.l2 * m.weights.squaredNorm();
    if (obj < best_obj) {
      best_obj = obj;
      best = m;
    }
    const double step = config.lr / std::sqrt(static_cast<double>(epoch));
    m.weights -= step * grad_w;
    m.intercept -= step * grad_b;
  }
  LinearModel raw;
  raw.weights = best.weights.array() / sd.transpose().array();
  raw.intercept = best.intercept - mu.dot(raw.weights);
  return raw;
}

}  // namespace anxpipe::learn
