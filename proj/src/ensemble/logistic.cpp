#include <cmath>

#include "anxpipe/ensemble/learners.hpp"
#include "anxpipe/error.hpp"

namespace anxpipe::learn {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double mean_log_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& y) {
  double sum = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double z = scores[i];
    // log(1 + e^z) - y z, computed stably
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    sum += softplus - y[i] * z;
  }
  return scores.size() == 0 ? 0.0 : sum / static_cast<double>(scores.size());
}

LinearModel fit_logistic_standardized(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      const LogisticConfig& config) {
  if (X.rows() != y.size()) throw DataError("logistic: row count does not match labels");
  if (X.rows() == 0) throw DataError("logistic: empty design");
  const double n = static_cast<double>(X.rows());
  LinearModel m{Eigen::VectorXd::Zero(X.cols()), 0.0};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Eigen::VectorXd residual = m.margins(X).unaryExpr([](double z) { return sigmoid(z); }) - y;
    const Eigen::VectorXd grad_w = X.transpose() * residual / n + config.l2 * m.weights;
    const double grad_b = residual.sum() / n;
    m.weights -= config.lr * grad_w;
    m.intercept -= config.lr * grad_b;
  }
  return m;
}

LinearModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LogisticConfig& config) {
  const Eigen::RowVectorXd mu = X.colwise().mean();
  Eigen::RowVectorXd sd = ((X.rowwise() - mu).array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < sd.size(); ++j)
    if (sd[j] < 1e-12) sd[j] = 1.0;
  const Eigen::MatrixXd Xz = (X.rowwise() - mu).array().rowwise() / sd.array();
  LinearModel z = fit_logistic_standardized(Xz, y, config);
  LinearModel raw;
  raw.weights = z.weights.array() / sd.transpose().array();
  raw.intercept = z.intercept - mu.dot(raw.weights);
  return raw;
}

}  // namespace anxpipe::learn
