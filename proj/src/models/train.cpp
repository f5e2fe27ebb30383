#include <algorithm>
#include <cmath>
#include <numeric>

#include "anxpipe/error.hpp"
#include "anxpipe/models/models.hpp"
#include "anxpipe/nn/adam.hpp"

namespace anxpipe::models {

std::vector<std::size_t> epoch_order(std::span<const std::string> ids, std::uint64_t seed, int epoch) {
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  for (std::size_t i = 0; i < ids.size(); ++i)
    keyed.emplace_back(keyed_hash(seed, static_cast<std::uint64_t>(epoch), ids[i]), i);
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return ids[a.second] < ids[b.second];
  });
  std::vector<std::size_t> order;
  for (const auto& k : keyed) order.push_back(k.second);
  return order;
}

namespace {

template <typename Example>
std::string example_id(const Example& e) {
  return e.cm->post_id;
}

template <typename Example>
void check_examples(std::span<const Example> xs, const char* what) {
  if (xs.empty()) throw DataError(std::string(what) + " set is empty");
  for (const auto& x : xs) {
    if (!x.cm) throw DataError(std::string(what) + " example without features");
    if (x.label != 0 && x.label != 1) throw DataError("label of post " + x.cm->post_id + " must be 0 or 1");
  }
}

// Shared epoch loop. Net provides:
//   logits(params, example, trace*)   backward(dlogits, trace, params)
template <typename Model, typename Example, typename Net>
TrainResult<Model> run_training(Model model, std::span<const Example> train, std::span<const Example> val,
                                const TrainConfig& config, Net net) {
  config.validate();
  check_examples(train, "training");
  check_examples(val, "validation");
  using Params = decltype(model.params);
  using Trace = typename Net::Trace;

  std::vector<std::string> ids;
  for (const auto& x : train) ids.push_back(example_id(x));

  TrainResult<Model> result{model, {}};
  nn::AdamState<Params> adam(model.params);
  nn::AdamHyper hyper;
  hyper.lr = config.lr;
  double best_f1 = -1.0;
  int since_best = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) order = epoch_order(ids, config.seed, epoch);
    double total = 0.0;
    for (std::size_t idx : order) {
      const Example& ex = train[idx];
      Trace tr;
      const Vec<double> logits = net.logits(model.params, ex, &tr);
      const double loss = nn::cross_entropy_logits(logits, ex.label);
      if (!std::isfinite(loss))
        throw DataError("training diverged at epoch " + std::to_string(epoch) + " (loss is not finite)");
      total += loss;
      Params grads = net.backward(nn::cross_entropy_grad(logits, ex.label), tr, model.params);
      nn::clip_global_norm(grads, config.clip_norm);
      nn::adam_step(model.params, grads, adam, hyper);
    }
    if (!nn::all_finite(model.params))
      throw DataError("training diverged at epoch " + std::to_string(epoch) + " (parameters are not finite)");

    long tp = 0, fp = 0, fn = 0, tn = 0;
    for (const auto& ex : val) {
      const Vec<double> p = class_probabilities(net.logits(model.params, ex, nullptr));
      const int hat = p[1] >= 0.5 ? 1 : 0;
      if (hat == 1) (ex.label == 1 ? tp : fp)++;
      else (ex.label == 1 ? fn : tn)++;
    }
    EpochRecord rec{epoch, total / static_cast<double>(train.size()), eval::Metrics::from_counts(tp, fp, fn, tn)};
    result.history.epochs.push_back(rec);
    if (rec.validation.f1 > best_f1) {
      best_f1 = rec.validation.f1;
      result.history.best_epoch = epoch;
      result.model.params = model.params;
      since_best = 0;
    } else if (config.early_stop_patience > 0 && ++since_best >= config.early_stop_patience) {
      break;
    }
  }
  return result;
}

void check_m4(const M4Example& ex, const M4Dims& d) {
  if (!ex.cm->standardized) throw DataError("feature matrix of post " + ex.cm->post_id + " is not standardized");
  if (ex.cm->width() != d.input_dim || ex.cm->windows() < 1)
    throw ShapeError("feature matrix of post " + ex.cm->post_id + " does not match the model input width");
}

struct M4Net {
  using Trace = M4Trace<double>;
  M4Dims dims;
  Vec<double> logits(const M4Params<double>& p, const M4Example& ex, Trace* tr) const {
    check_m4(ex, dims);
    return m4_logits(ex.cm->rows, p, tr);
  }
  M4Params<double> backward(const Vec<double>& d, const Trace& tr, const M4Params<double>& p) const {
    return m4_backward(d, tr, p);
  }
};

struct M5Net {
  using Trace = M5Trace<double>;
  M5Dims dims;
  Vec<double> logits(const M5Params<double>& p, const M5Example& ex, Trace* tr) const {
    if (!ex.tokens) throw DataError("post " + ex.cm->post_id + " has no token embeddings");
    check_m4(M4Example{ex.cm, ex.label}, M4Dims{dims.input_dim});
    const auto M = ex.tokens->tokens();
    if (M < 1 || M > static_cast<Eigen::Index>(exchange::kMaxTokens) || ex.tokens->vectors.cols() != dims.embed_dim)
      throw ShapeError("token embeddings of post " + ex.cm->post_id + " have the wrong shape");
    return m5_logits(ex.tokens->vectors, ex.cm->rows, p, tr);
  }
  M5Params<double> backward(const Vec<double>& d, const Trace& tr, const M5Params<double>& p) const {
    return m5_backward(d, tr, p);
  }
};

}  // namespace

TrainResult<M4Model> train_m4(const M4Dims& dims, std::span<const M4Example> train, std::span<const M4Example> val,
                              const TrainConfig& config) {
  return run_training(make_m4(dims, config.seed), train, val, config, M4Net{dims});
}

TrainResult<M5Model> train_m5(const M5Dims& dims, std::span<const M5Example> train, std::span<const M5Example> val,
                              const TrainConfig& config) {
  return run_training(make_m5(dims, config.seed), train, val, config, M5Net{dims});
}

}  // namespace anxpipe::models
