#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>

#include <json.hpp>

#include "anxpipe/ensemble/learners.hpp"

namespace anxpipe::learn {

enum class MetaKind { logistic, ridge, linear_svm, gradient_boosting };

/// Accepts logistic, ridge, linear_svm (alias svm, svc) and
/// gradient_boosting (alias gb, xgboost).
MetaKind parse_meta_kind(const std::string& s);
std::string to_string(MetaKind k);

struct MetaHyper {
  LogisticConfig logistic;
  RidgeConfig ridge;
  SvmConfig svm;
  BoostingConfig boosting;
};

/// Reads optional keys logistic.{l2,epochs,lr}, ridge.lambda,
/// svm.{l2,epochs,lr}, boosting.{rounds,shrinkage}; unknown keys are errors.
MetaHyper parse_meta_hyper(const nlohmann::json& j);

/// Trained stacking meta-learner over k base probabilities.
struct MetaLearner {
  MetaKind kind = MetaKind::logistic;
  std::variant<LinearModel, BoostedStumps> model;
  Eigen::Index width = 0;

  /// Decision score: margin for the linear kinds, boosted score otherwise.
  double score(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// sigmoid(score): the logistic link for logistic and boosting, a
  /// rank-preserving squash of the ridge / SVM margin (0 maps to 0.5).
  double probability(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  int label(const Eigen::Ref<const Eigen::VectorXd>& z) const { return probability(z) >= 0.5 ? 1 : 0; }
};

/// y in {0,1}. Throws DataError when y is single-class or sizes disagree.
MetaLearner fit_meta(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, MetaKind kind, const MetaHyper& hyper = {});

nlohmann::json to_json(const MetaLearner& m);
MetaLearner meta_from_json(const nlohmann::json& j);

}  // namespace anxpipe::learn
