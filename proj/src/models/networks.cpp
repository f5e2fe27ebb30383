#include "anxpipe/error.hpp"
#include "anxpipe/models/models.hpp"

namespace anxpipe::models {

namespace {

void require_features(const feat::FeatureMatrix& cm, Eigen::Index width) {
  if (!cm.standardized) throw DataError("feature matrix of post " + cm.post_id + " is not standardized");
  if (cm.width() != width)
    throw ShapeError("feature matrix of post " + cm.post_id + " has width " + std::to_string(cm.width()) +
                     ", model expects " + std::to_string(width));
  if (cm.windows() < 1) throw DataError("feature matrix of post " + cm.post_id + " has no windows");
}

}  // namespace

M4Model make_m4(const M4Dims& dims, std::uint64_t seed) {
  validate(dims);
  Rng rng(seed);
  return {dims, M4Params<double>::init(dims, rng), std::nullopt};
}

M5Model make_m5(const M5Dims& dims, std::uint64_t seed) {
  validate(dims);
  Rng rng(seed);
  return {dims, M5Params<double>::init(dims, rng), std::nullopt};
}

Vec<double> class_probabilities(const Vec<double>& logits) { return nn::softmax2(logits); }

Prediction m4_forward(const feat::FeatureMatrix& cm, const M4Model& model) {
  require_features(cm, model.dims.input_dim);
  const Vec<double> p = class_probabilities(m4_logits(cm.rows, model.params));
  return Prediction::from_probability(cm.post_id, p[1]);
}

Prediction m5_forward(const exchange::EmbeddingSequence& tokens, const feat::FeatureMatrix& cm, const M5Model& model) {
  if (tokens.vectors.cols() != model.dims.embed_dim)
    throw ShapeError("unexpected embedding dim " + std::to_string(tokens.vectors.cols()));
  if (tokens.tokens() < 1 || tokens.tokens() > static_cast<Eigen::Index>(exchange::kMaxTokens))
    throw DataError("token count " + std::to_string(tokens.tokens()) + " outside [1, 512] for post " + tokens.post_id);
  if (tokens.post_id != cm.post_id)
    throw DataError("embedding post " + tokens.post_id + " does not match feature post " + cm.post_id);
  require_features(cm, model.dims.input_dim);
  const Vec<double> p = class_probabilities(m5_logits(tokens.vectors, cm.rows, model.params));
  return Prediction::from_probability(cm.post_id, p[1]);
}

feat::FeatureMatrix prepare_features(const feat::FeatureMatrix& cm, const std::optional<feat::Standardizer>& s) {
  if (cm.standardized || !s) return cm;
  return feat::apply_standardizer(cm, *s);
}

}  // namespace anxpipe::models
