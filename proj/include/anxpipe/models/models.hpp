#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anxpipe/evalkit.hpp"
#include "anxpipe/exchange.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"
#include "anxpipe/models/networks.hpp"
#include "anxpipe/nn/checkpoint.hpp"
#include "anxpipe/prediction.hpp"

namespace anxpipe::models {

enum class ModelKind { m4, m5 };
ModelKind parse_model_kind(const std::string& s);
std::string to_string(ModelKind k);

enum class Preset { paper, desk };
Preset parse_preset(const std::string& s);

/// paper: H=1024, L=4.  desk: H=64, L=2.  fc sizes 256 -> 128 in both.
M4Dims m4_preset(Preset p, Eigen::Index input_dim = 168);
/// paper: H1=512, L1=2, H2=1024, L2=3.  desk: H1=32, L1=1, H2=64, L2=2.
M5Dims m5_preset(Preset p, Eigen::Index input_dim = 168);

void validate(const M4Dims& d);
void validate(const M5Dims& d);

struct TrainConfig {
  int epochs = 30;
  double lr = 1e-3;
  std::uint64_t seed = 42;  // initialisation and per-epoch shuffle
  double clip_norm = 5.0;
  int early_stop_patience = 0;  // epochs without validation-F1 gain; 0 disables
  bool shuffle = true;

  /// epochs >= 0 (0 returns the initial parameters), lr > 0, clip_norm > 0.
  void validate() const;
};

struct M4Model {
  M4Dims dims;
  M4Params<double> params;
  std::optional<feat::Standardizer> standardizer;
};

struct M5Model {
  M5Dims dims;
  M5Params<double> params;
  std::optional<feat::Standardizer> standardizer;
};

using AnyModel = std::variant<M4Model, M5Model>;

M4Model make_m4(const M4Dims& dims, std::uint64_t seed);
M5Model make_m5(const M5Dims& dims, std::uint64_t seed);

/// Class probabilities (p0, p1) from logits; they sum to 1.
Vec<double> class_probabilities(const Vec<double>& logits);

/// cm must be standardised and have width dims.input_dim.
Prediction m4_forward(const feat::FeatureMatrix& cm, const M4Model& model);
/// tokens: 1 <= M <= 512 rows of width 768; cm standardised.
Prediction m5_forward(const exchange::EmbeddingSequence& tokens, const feat::FeatureMatrix& cm, const M5Model& model);

/// Standardises raw matrices with the model's stored standardizer (if any)
/// before the forward pass.
feat::FeatureMatrix prepare_features(const feat::FeatureMatrix& cm, const std::optional<feat::Standardizer>& s);

struct M4Example {
  const feat::FeatureMatrix* cm = nullptr;
  int label = 0;
};

struct M5Example {
  const exchange::EmbeddingSequence* tokens = nullptr;
  const feat::FeatureMatrix* cm = nullptr;
  int label = 0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean cross-entropy over the epoch's updates
  eval::Metrics validation;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 0 when no epoch ran
};

template <typename Model>
struct TrainResult {
  Model model;
  TrainHistory history;
};

/// Per-post training: seeded shuffle keyed on post id, cross-entropy,
/// BPTT, global-norm clipping, Adam. Returns the parameters of the epoch
/// with the highest validation F1 (earliest on ties). Throws DataError for
/// an empty train or validation set and when the loss turns non-finite.
TrainResult<M4Model> train_m4(const M4Dims& dims, std::span<const M4Example> train, std::span<const M4Example> val,
                              const TrainConfig& config);
TrainResult<M5Model> train_m5(const M5Dims& dims, std::span<const M5Example> train, std::span<const M5Example> val,
                              const TrainConfig& config);

/// Post order used for one epoch: ascending keyed_hash(seed, epoch, id).
std::vector<std::size_t> epoch_order(std::span<const std::string> ids, std::uint64_t seed, int epoch);

// ---- checkpoints ---------------------------------------------------------
// Tensors: meta.kind ([4] or [5]), meta.config (dims), parameters by name,
// and when present std.mean, std.scale, std.feature_ids (UTF-8 bytes of the
// newline-joined ids, one byte per entry).

std::vector<nn::NamedTensor> to_tensors(const AnyModel& model);
AnyModel from_tensors(const std::vector<nn::NamedTensor>& tensors);

void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);
/// Throw ShapeError when the checkpoint holds the other kind.
M4Model load_m4(const std::filesystem::path& path);
M5Model load_m5(const std::filesystem::path& path);

}  // namespace anxpipe::models
