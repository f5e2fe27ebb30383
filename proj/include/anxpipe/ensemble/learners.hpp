#pragma once

#include <Eigen/Core>
#include <vector>

namespace anxpipe::learn {

/// w·x + b.
struct LinearModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;

  double margin(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + intercept; }
  Eigen::VectorXd margins(const Eigen::MatrixXd& X) const {
    return (X * weights).array() + intercept;
  }
};

/// Full-batch gradient descent on mean log-loss + (l2/2)|w|^2. Columns are
/// z-scored internally; returned weights are in the caller's raw units.
struct LogisticConfig {
  double l2 = 1e-4;
  int epochs = 500;
  double lr = 0.1;
};

/// y in {0,1}.
LinearModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LogisticConfig& config = {});

/// Same fit, but weights stay in z-scored units (what RFE ranks on).
LinearModel fit_logistic_standardized(const Eigen::MatrixXd& Xz, const Eigen::VectorXd& y,
                                      const LogisticConfig& config = {});

/// Ridge least squares on +/-1 targets with an unpenalised intercept:
/// w solves (ZcᵀZc + λI) w = Zcᵀ yc on centred Z and targets, b = ȳ - z̄ᵀw.
struct RidgeConfig {
  double lambda = 1.0;
};

LinearModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const RidgeConfig& config = {});

/// Ridge solution on already-centred data plus the normal-equation residual
/// max |(ZcᵀZc + λI) w - Zcᵀ yc|, exposed for verification.
struct RidgeSolution {
  LinearModel model;
  double normal_equation_residual = 0.0;
};
RidgeSolution solve_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const RidgeConfig& config = {});

/// Linear SVM: full-batch subgradient descent on mean hinge loss
/// + (l2/2)|w|^2 with step lr/sqrt(t), ±1 targets, z-scored columns; the
/// returned model is the iterate with the lowest objective.
struct SvmConfig {
  double l2 = 1e-3;
  int epochs = 1000;
  double lr = 0.5;
};

LinearModel fit_linear_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const SvmConfig& config = {});

/// Depth-1 regression tree: x[feature] <= threshold ? left : right.
struct Stump {
  Eigen::Index feature = 0;
  double threshold = 0.0;
  double left = 0.0;
  double right = 0.0;

  double eval(const Eigen::Ref<const Eigen::VectorXd>& x) const { return x[feature] <= threshold ? left : right; }
};

/// Gradient boosting of stumps on logistic loss. Score starts at the log-odds
/// of the positive rate; each round fits a stump to the residuals y - p by
/// least squares (leaf value = mean residual) and adds shrinkage * stump.
struct BoostingConfig {
  int rounds = 200;
  double shrinkage = 0.1;
};

struct BoostedStumps {
  double base_score = 0.0;
  double shrinkage = 0.1;
  std::vector<Stump> stumps;
  std::vector<double> train_loss;  // mean log-loss after each round (index 0 = base score only)

  double score(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

BoostedStumps fit_boosted_stumps(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
                                 const BoostingConfig& config = {});

double sigmoid(double z);

/// Mean log-loss of scores against {0,1} labels.
double mean_log_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& y01);

}  // namespace anxpipe::learn
