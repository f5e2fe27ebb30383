#include "anxpipe/ensemble/stacking.hpp"

#include <algorithm>
#include <set>

#include "anxpipe/error.hpp"
#include "anxpipe/rng.hpp"

namespace anxpipe::ensemble {

namespace {

constexpr std::uint64_t kFoldSalt = 0xf01d;
constexpr std::uint64_t kInnerValSalt = 0x1a7e;

std::vector<std::size_t> hash_order(std::span<const std::size_t> idx, std::span<const std::string> ids,
                                    std::uint64_t seed, std::uint64_t salt) {
  std::vector<std::size_t> out(idx.begin(), idx.end());
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const auto ha = keyed_hash(seed, salt, ids[a]), hb = keyed_hash(seed, salt, ids[b]);
    if (ha != hb) return ha < hb;
    return ids[a] < ids[b];
  });
  return out;
}

}  // namespace

std::vector<int> assign_folds(std::span<const std::string> post_ids, std::span<const int> labels, int folds,
                              std::uint64_t seed) {
  if (folds < 2) throw DataError("stacking needs at least 2 folds");
  if (post_ids.size() != labels.size()) throw DataError("post and label counts differ");
  if (post_ids.size() < static_cast<std::size_t>(folds)) throw DataError("fewer posts than folds");
  std::vector<int> fold(post_ids.size(), -1);
  int next = 0;
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    for (std::size_t i : hash_order(members, post_ids, seed, kFoldSalt)) {
      fold[i] = next;
      next = (next + 1) % folds;
    }
  }
  for (std::size_t i = 0; i < fold.size(); ++i)
    if (fold[i] < 0) throw DataError("label of post " + post_ids[i] + " must be 0 or 1");
  return fold;
}

StackingDataset build_oof_matrix(std::span<const BaseSource> bases, std::span<const std::string> post_ids,
                                 std::span<const int> labels, int folds, std::uint64_t seed) {
  if (bases.empty()) throw DataError("stacking needs at least one base source");
  {
    std::set<std::string> seen;
    for (const auto& id : post_ids)
      if (!seen.insert(id).second) throw DataError("duplicate post id: " + id);
  }
  StackingDataset ds;
  const auto n = static_cast<Eigen::Index>(post_ids.size());
  ds.post_ids.assign(post_ids.begin(), post_ids.end());
  ds.fold_of = assign_folds(post_ids, labels, folds, seed);
  ds.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) ds.y[i] = labels[static_cast<std::size_t>(i)];
  ds.Z.resize(n, static_cast<Eigen::Index>(bases.size()));
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const auto& base = bases[b];
    ds.base_ids.push_back(base.id);
    const auto col = static_cast<Eigen::Index>(b);
    if (base.file) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& id = post_ids[static_cast<std::size_t>(i)];
        const auto it = base.file->entries.find(id);
        if (it == base.file->entries.end()) throw DataError("post " + id + " missing from predictions of model " + base.id);
        ds.Z(i, col) = it->second;
      }
      continue;
    }
    if (!base.trainable) throw DataError("base " + base.id + " has neither a prediction file nor a trainer");
    for (int k = 0; k < folds; ++k) {
      std::vector<std::size_t> train, held;
      for (std::size_t i = 0; i < post_ids.size(); ++i) (ds.fold_of[i] == k ? held : train).push_back(i);
      const auto probs = base.trainable(train, held);
      if (probs.size() != held.size()) throw DataError("base " + base.id + " returned the wrong number of predictions");
      for (std::size_t j = 0; j < held.size(); ++j) {
        if (!(probs[j] >= 0.0 && probs[j] <= 1.0)) throw DataError("base " + base.id + " produced a probability outside [0,1]");
        ds.Z(static_cast<Eigen::Index>(held[j]), col) = probs[j];
      }
    }
  }
  return ds;
}

FitPredictFn model_base(models::ModelKind kind, models::Preset preset, const models::TrainConfig& config,
                        const ModelInputs& inputs) {
  if (!inputs.features) throw DataError("trainable base needs feature matrices");
  if (inputs.labels.size() != inputs.features->size()) throw DataError("trainable base: label count differs");
  if (kind == models::ModelKind::m5 && (!inputs.embeddings || inputs.embeddings->size() != inputs.features->size()))
    throw DataError("m5 base needs one embedding sequence per post");
  return [=](std::span<const std::size_t> train_idx, std::span<const std::size_t> predict_idx) {
    const auto& raw = *inputs.features;
    std::vector<std::string> ids;
    for (const auto& m : raw) ids.push_back(m.post_id);
    const auto ordered = hash_order(train_idx, ids, config.seed, kInnerValSalt);
    std::vector<std::size_t> inner_train, inner_val;
    for (std::size_t k = 0; k < ordered.size(); ++k) (k % 10 == 0 ? inner_val : inner_train).push_back(ordered[k]);
    std::sort(inner_train.begin(), inner_train.end());
    std::sort(inner_val.begin(), inner_val.end());
    if (inner_train.empty()) throw DataError("trainable base: too few training posts");

    std::vector<feat::FeatureMatrix> fit_rows;
    for (auto i : inner_train) fit_rows.push_back(raw[i]);
    const auto standardizer = feat::fit_standardizer(fit_rows);
    std::vector<feat::FeatureMatrix> std_rows(raw.size());
    auto prepared = [&](std::size_t i) -> const feat::FeatureMatrix& {
      if (!std_rows[i].standardized) std_rows[i] = feat::apply_standardizer(raw[i], standardizer);
      return std_rows[i];
    };
    const Eigen::Index width = static_cast<Eigen::Index>(standardizer.feature_ids.size());
    std::vector<double> out;
    if (kind == models::ModelKind::m4) {
      std::vector<models::M4Example> tr, va;
      for (auto i : inner_train) tr.push_back({&prepared(i), inputs.labels[i]});
      for (auto i : inner_val) va.push_back({&prepared(i), inputs.labels[i]});
      auto fitted = models::train_m4(models::m4_preset(preset, width), tr, va, config);
      for (auto i : predict_idx) out.push_back(models::m4_forward(prepared(i), fitted.model).prob_positive);
    } else {
      const auto& emb = *inputs.embeddings;
      std::vector<models::M5Example> tr, va;
      for (auto i : inner_train) tr.push_back({emb[i], &prepared(i), inputs.labels[i]});
      for (auto i : inner_val) va.push_back({emb[i], &prepared(i), inputs.labels[i]});
      auto fitted = models::train_m5(models::m5_preset(preset, width), tr, va, config);
      for (auto i : predict_idx) out.push_back(models::m5_forward(*emb[i], prepared(i), fitted.model).prob_positive);
    }
    return out;
  };
}

}  // namespace anxpipe::ensemble
