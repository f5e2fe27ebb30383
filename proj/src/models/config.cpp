#include <cmath>

#include "anxpipe/error.hpp"
#include "anxpipe/models/models.hpp"

namespace anxpipe::models {

ModelKind parse_model_kind(const std::string& s) {
  if (s == "m4" || s == "M4") return ModelKind::m4;
  if (s == "m5" || s == "M5") return ModelKind::m5;
  throw DataError("unknown model kind \"" + s + "\" (expected m4 or m5)");
}

std::string to_string(ModelKind k) { return k == ModelKind::m4 ? "m4" : "m5"; }

Preset parse_preset(const std::string& s) {
  if (s == "paper") return Preset::paper;
  if (s == "desk") return Preset::desk;
  throw DataError("unknown model preset \"" + s + "\" (expected paper or desk)");
}

M4Dims m4_preset(Preset p, Eigen::Index input_dim) {
  M4Dims d;
  d.input_dim = input_dim;
  if (p == Preset::desk) {
    d.hidden = 64;
    d.layers = 2;
  }
  return d;
}

M5Dims m5_preset(Preset p, Eigen::Index input_dim) {
  M5Dims d;
  d.input_dim = input_dim;
  if (p == Preset::desk) {
    d.hidden_tokens = 32;
    d.layers_tokens = 1;
    d.hidden_features = 64;
    d.layers_features = 2;
  }
  return d;
}

void validate(const M4Dims& d) {
  if (d.input_dim < 1 || d.hidden < 1 || d.layers < 1 || d.fc1 < 1 || d.fc2 < 1)
    throw DataError("m4 dimensions must all be >= 1");
}

void validate(const M5Dims& d) {
  if (d.embed_dim != static_cast<Eigen::Index>(exchange::kEmbeddingDim))
    throw DataError("m5 embed_dim must be 768");
  if (d.input_dim < 1 || d.hidden_tokens < 1 || d.layers_tokens < 1 || d.hidden_features < 1 ||
      d.layers_features < 1 || d.fc1 < 1 || d.fc2 < 1 || d.fc3 < 1)
    throw DataError("m5 dimensions must all be >= 1");
}

void TrainConfig::validate() const {
  if (epochs < 0) throw DataError("epochs must be >= 0");
  if (!(lr > 0) || !std::isfinite(lr)) throw DataError("learning rate must be > 0");
  if (!(clip_norm > 0)) throw DataError("clip_norm must be > 0");
  if (early_stop_patience < 0) throw DataError("early_stop_patience must be >= 0");
}

}  // namespace anxpipe::models
