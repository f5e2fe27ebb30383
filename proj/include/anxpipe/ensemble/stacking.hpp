#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "anxpipe/ensemble/meta.hpp"
#include "anxpipe/exchange.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"
#include "anxpipe/models/models.hpp"

namespace anxpipe::ensemble {

/// Z column j holds base j's out-of-fold probability for each post.
struct StackingDataset {
  Eigen::MatrixXd Z;
  Eigen::VectorXd y;
  std::vector<std::string> base_ids;
  std::vector<std::string> post_ids;
  std::vector<int> fold_of;  // fold holding each post out
};

/// Trains on the posts at `train` and returns P(positive) for the posts at
/// `predict`, indices into the shared post list.
using FitPredictFn =
    std::function<std::vector<double>(std::span<const std::size_t> train, std::span<const std::size_t> predict)>;

struct BaseSource {
  std::string id;
  // exactly one of these is set
  const exchange::BasePredictionSet* file = nullptr;
  FitPredictFn trainable;
};

/// Stratified seeded K-fold assignment: each class is ordered by
/// keyed_hash(seed, id) and dealt round-robin into folds.
std::vector<int> assign_folds(std::span<const std::string> post_ids, std::span<const int> labels, int folds,
                              std::uint64_t seed);

/// File sources contribute their probabilities directly; trainable
/// sources are fit on K-1 folds and predict the held-out fold. Columns
/// follow the order of `bases`. Throws DataError naming post and model
/// for a post missing from a prediction file.
StackingDataset build_oof_matrix(std::span<const BaseSource> bases, std::span<const std::string> post_ids,
                                 std::span<const int> labels, int folds = 5, std::uint64_t seed = 42);

/// Posts shared by the trainable model adapters.
struct ModelInputs {
  const std::vector<feat::FeatureMatrix>* features = nullptr;                 // raw (unstandardised)
  const std::vector<const exchange::EmbeddingSequence*>* embeddings = nullptr;  // m5 only, aligned with features
  std::vector<int> labels;
};

/// Adapter for a trainable M4/M5 base. The training indices are split
/// into an inner train / validation pair (every 10th post in seeded order
/// goes to validation), a standardizer is fit on the inner train posts, and
/// the model is trained with `config`.
FitPredictFn model_base(models::ModelKind kind, models::Preset preset, const models::TrainConfig& config,
                        const ModelInputs& inputs);

// ---- spec file -----------------------------------------------------------
//   {"bases": [{"type": "file", "path": "m1.csv", "id": "M1", "eval_path": "m1_test.csv"},
//              {"type": "train", "model": "m4", "seed": 7, "id": "M4"}],
//    "meta": "gradient_boosting", "hyper": {...}, "folds": 5, "seed": 42,
//    "preset": "desk", "train": {"epochs": 30, "lr": 0.001, ...}}
// Relative paths resolve against the spec file's directory.

struct BaseSpec {
  enum class Type { file, train } type = Type::file;
  std::string id;
  std::filesystem::path path;
  std::filesystem::path eval_path;
  models::ModelKind model = models::ModelKind::m4;
  std::uint64_t seed = 42;
};

struct EnsembleSpec {
  std::vector<BaseSpec> bases;
  learn::MetaKind meta = learn::MetaKind::gradient_boosting;
  learn::MetaHyper hyper;
  int folds = 5;
  std::uint64_t seed = 42;
  models::Preset preset = models::Preset::desk;
  models::TrainConfig train;
};

EnsembleSpec parse_ensemble_spec(const nlohmann::json& j, const std::filesystem::path& base_dir);
EnsembleSpec read_ensemble_spec(const std::filesystem::path& path);

}  // namespace anxpipe::ensemble
