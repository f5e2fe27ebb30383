#include <unordered_map>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"

namespace anxpipe::feat {

Standardizer fit_standardizer(std::span<const FeatureMatrix> train) {
  if (train.empty()) throw DataError("standardizer needs at least one matrix");
  Standardizer s;
  s.feature_ids = train.front().feature_ids;
  const auto f = static_cast<Eigen::Index>(s.feature_ids.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(f);
  double rows = 0;
  for (const auto& m : train) {
    if (m.feature_ids != s.feature_ids) throw DataError("feature id mismatch in matrix for post " + m.post_id);
    sum += m.rows.colwise().sum().transpose();
    rows += static_cast<double>(m.windows());
  }
  if (rows == 0) throw DataError("standardizer needs at least one row");
  s.mean = sum / rows;
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(f);
  for (const auto& m : train)
    sq += (m.rows.rowwise() - s.mean.transpose()).array().square().colwise().sum().matrix().transpose();
  s.scale = (sq / rows).cwiseSqrt();
  return s;
}

FeatureMatrix apply_standardizer(const FeatureMatrix& m, const Standardizer& s) {
  if (m.feature_ids != s.feature_ids) throw DataError("feature id mismatch between matrix and standardizer");
  FeatureMatrix out = m;
  for (Eigen::Index j = 0; j < m.width(); ++j) {
    if (s.scale[j] < kMinScale) {
      out.rows.col(j).setZero();
    } else {
      out.rows.col(j) = (m.rows.col(j).array() - s.mean[j]) / s.scale[j];
    }
  }
  out.standardized = true;
  return out;
}

Eigen::MatrixXd post_level_design(std::span<const FeatureMatrix> matrices) {
  if (matrices.empty()) return {};
  Eigen::MatrixXd X(static_cast<Eigen::Index>(matrices.size()), matrices.front().width());
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (matrices[i].width() != X.cols()) throw DataError("matrices differ in width");
    X.row(static_cast<Eigen::Index>(i)) = matrices[i].rows.colwise().mean();
  }
  return X;
}

FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::string>& ids) {
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t j = 0; j < m.feature_ids.size(); ++j) index.emplace(m.feature_ids[j], static_cast<Eigen::Index>(j));
  FeatureMatrix out;
  out.post_id = m.post_id;
  out.standardized = m.standardized;
  out.rows.resize(m.windows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const auto it = index.find(ids[j]);
    if (it == index.end()) throw DataError("feature " + ids[j] + " missing from matrix of post " + m.post_id);
    out.rows.col(static_cast<Eigen::Index>(j)) = m.rows.col(it->second);
    out.feature_ids.push_back(ids[j]);
  }
  return out;
}

}  // namespace anxpipe::feat
