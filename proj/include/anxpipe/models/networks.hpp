#pragma once

#include "anxpipe/nn/dense.hpp"
#include "anxpipe/nn/head.hpp"
#include "anxpipe/nn/lstm.hpp"

namespace anxpipe::models {

using nn::Mat;
using nn::Vec;

/// Layer sizes of the feature-sequence classifier:
///   h = BiLSTM_L,H(CM)  ->  fc1 (2H -> fc1, ReLU)  ->  fc2 (fc1 -> fc2, ReLU)  ->  head (fc2 -> 2)
struct M4Dims {
  Eigen::Index input_dim = 168;
  Eigen::Index hidden = 1024;
  std::size_t layers = 4;
  Eigen::Index fc1 = 256;
  Eigen::Index fc2 = 128;
};

/// Layer sizes of the hybrid classifier:
///   s = BiLSTM_L1,H1(S)   -> fc1 (2H1 -> fc1, ReLU)
///   h = BiLSTM_L2,H2(CM)  -> fc2 (2H2 -> fc2, ReLU)
///   fc3 ([fc1 ⊕ fc2] -> fc3, ReLU) -> head (fc3 -> 2)
struct M5Dims {
  Eigen::Index embed_dim = 768;
  Eigen::Index input_dim = 168;
  Eigen::Index hidden_tokens = 512;
  std::size_t layers_tokens = 2;
  Eigen::Index hidden_features = 1024;
  std::size_t layers_features = 3;
  Eigen::Index fc1 = 512;
  Eigen::Index fc2 = 512;
  Eigen::Index fc3 = 128;
};

template <typename Scalar>
struct M4Params {
  using scalar_type = Scalar;
  nn::BiLstmParams<Scalar> lstm;
  nn::DenseParams<Scalar> fc1, fc2, head;

  static M4Params zeros(const M4Dims& d) {
    return {nn::BiLstmParams<Scalar>::zeros(d.input_dim, d.hidden, d.layers),
            nn::DenseParams<Scalar>::zeros(2 * d.hidden, d.fc1, nn::Activation::relu),
            nn::DenseParams<Scalar>::zeros(d.fc1, d.fc2, nn::Activation::relu),
            nn::DenseParams<Scalar>::zeros(d.fc2, 2, nn::Activation::none)};
  }
  static M4Params init(const M4Dims& d, Rng& rng) {
    auto lstm = nn::BiLstmParams<Scalar>::init(d.input_dim, d.hidden, d.layers, rng);
    auto fc1 = nn::DenseParams<Scalar>::init(2 * d.hidden, d.fc1, nn::Activation::relu, rng);
    auto fc2 = nn::DenseParams<Scalar>::init(d.fc1, d.fc2, nn::Activation::relu, rng);
    auto head = nn::DenseParams<Scalar>::init(d.fc2, 2, nn::Activation::none, rng);
    return {std::move(lstm), std::move(fc1), std::move(fc2), std::move(head)};
  }

  template <typename F>
  void for_each(F&& f) {
    lstm.for_each(f, "bilstm.");
    fc1.for_each(f, "fc1.");
    fc2.for_each(f, "fc2.");
    head.for_each(f, "head.");
  }
  template <typename F>
  void for_each(F&& f) const {
    lstm.for_each(f, "bilstm.");
    fc1.for_each(f, "fc1.");
    fc2.for_each(f, "fc2.");
    head.for_each(f, "head.");
  }
};

template <typename Scalar>
struct M4Trace {
  nn::BiLstmOutput<Scalar> lstm;
  nn::DenseCache<Scalar> fc1, fc2, head;
  Vec<Scalar> logits;
};

/// Logits for a standardised N x input_dim sequence.
template <typename Scalar>
Vec<Scalar> m4_logits(const Mat<Scalar>& seq, const M4Params<Scalar>& p, M4Trace<Scalar>* trace = nullptr) {
  M4Trace<Scalar> local;
  M4Trace<Scalar>& tr = trace ? *trace : local;
  tr.lstm = nn::bilstm_forward(seq, p.lstm);
  const Vec<Scalar> a1 = nn::dense_forward(tr.lstm.final, p.fc1, &tr.fc1);
  const Vec<Scalar> a2 = nn::dense_forward(a1, p.fc2, &tr.fc2);
  tr.logits = nn::dense_forward(a2, p.head, &tr.head);
  return tr.logits;
}

template <typename Scalar>
M4Params<Scalar> m4_backward(const Vec<Scalar>& dlogits, const M4Trace<Scalar>& tr, const M4Params<Scalar>& p) {
  M4Params<Scalar> g = nn::zeros_like(p);
  const Vec<Scalar> d2 = nn::dense_backward(dlogits, tr.head, p.head, g.head);
  const Vec<Scalar> d1 = nn::dense_backward(d2, tr.fc2, p.fc2, g.fc2);
  const Vec<Scalar> dh = nn::dense_backward(d1, tr.fc1, p.fc1, g.fc1);
  g.lstm = nn::bilstm_backward(dh, tr.lstm.cache, p.lstm).params;
  return g;
}

template <typename Scalar>
struct M5Params {
  using scalar_type = Scalar;
  nn::BiLstmParams<Scalar> tokens, features;
  nn::DenseParams<Scalar> fc1, fc2, fc3, head;

  static M5Params zeros(const M5Dims& d) {
    return {nn::BiLstmParams<Scalar>::zeros(d.embed_dim, d.hidden_tokens, d.layers_tokens),
            nn::BiLstmParams<Scalar>::zeros(d.input_dim, d.hidden_features, d.layers_features),
            nn::DenseParams<Scalar>::zeros(2 * d.hidden_tokens, d.fc1, nn::Activation::relu),
            nn::DenseParams<Scalar>::zeros(2 * d.hidden_features, d.fc2, nn::Activation::relu),
            nn::DenseParams<Scalar>::zeros(d.fc1 + d.fc2, d.fc3, nn::Activation::relu),
            nn::DenseParams<Scalar>::zeros(d.fc3, 2, nn::Activation::none)};
  }
  static M5Params init(const M5Dims& d, Rng& rng) {
    auto t = nn::BiLstmParams<Scalar>::init(d.embed_dim, d.hidden_tokens, d.layers_tokens, rng);
    auto f = nn::BiLstmParams<Scalar>::init(d.input_dim, d.hidden_features, d.layers_features, rng);
    auto fc1 = nn::DenseParams<Scalar>::init(2 * d.hidden_tokens, d.fc1, nn::Activation::relu, rng);
    auto fc2 = nn::DenseParams<Scalar>::init(2 * d.hidden_features, d.fc2, nn::Activation::relu, rng);
    auto fc3 = nn::DenseParams<Scalar>::init(d.fc1 + d.fc2, d.fc3, nn::Activation::relu, rng);
    auto head = nn::DenseParams<Scalar>::init(d.fc3, 2, nn::Activation::none, rng);
    return {std::move(t), std::move(f), std::move(fc1), std::move(fc2), std::move(fc3), std::move(head)};
  }

  template <typename F>
  void for_each(F&& f) {
    tokens.for_each(f, "tokens.");
    features.for_each(f, "features.");
    fc1.for_each(f, "fc1.");
    fc2.for_each(f, "fc2.");
    fc3.for_each(f, "fc3.");
    head.for_each(f, "head.");
  }
  template <typename F>
  void for_each(F&& f) const {
    tokens.for_each(f, "tokens.");
    features.for_each(f, "features.");
    fc1.for_each(f, "fc1.");
    fc2.for_each(f, "fc2.");
    fc3.for_each(f, "fc3.");
    head.for_each(f, "head.");
  }
};

template <typename Scalar>
struct M5Trace {
  nn::BiLstmOutput<Scalar> tokens, features;
  nn::DenseCache<Scalar> fc1, fc2, fc3, head;
  Vec<Scalar> logits;
};

/// Logits for token embeddings S (M x embed_dim) and a standardised feature
/// sequence CM (N x input_dim).
template <typename Scalar>
Vec<Scalar> m5_logits(const Mat<Scalar>& S, const Mat<Scalar>& CM, const M5Params<Scalar>& p,
                      M5Trace<Scalar>* trace = nullptr) {
  M5Trace<Scalar> local;
  M5Trace<Scalar>& tr = trace ? *trace : local;
  tr.tokens = nn::bilstm_forward(S, p.tokens);
  tr.features = nn::bilstm_forward(CM, p.features);
  const Vec<Scalar> a1 = nn::dense_forward(tr.tokens.final, p.fc1, &tr.fc1);
  const Vec<Scalar> a2 = nn::dense_forward(tr.features.final, p.fc2, &tr.fc2);
  Vec<Scalar> cat(a1.size() + a2.size());
  cat << a1, a2;
  const Vec<Scalar> a3 = nn::dense_forward(cat, p.fc3, &tr.fc3);
  tr.logits = nn::dense_forward(a3, p.head, &tr.head);
  return tr.logits;
}

template <typename Scalar>
M5Params<Scalar> m5_backward(const Vec<Scalar>& dlogits, const M5Trace<Scalar>& tr, const M5Params<Scalar>& p) {
  M5Params<Scalar> g = nn::zeros_like(p);
  const Vec<Scalar> d3 = nn::dense_backward(dlogits, tr.head, p.head, g.head);
  const Vec<Scalar> dcat = nn::dense_backward(d3, tr.fc3, p.fc3, g.fc3);
  const Eigen::Index n1 = p.fc1.out_dim();
  const Vec<Scalar> ds = nn::dense_backward<Scalar>(dcat.head(n1), tr.fc1, p.fc1, g.fc1);
  const Vec<Scalar> dh = nn::dense_backward<Scalar>(dcat.tail(dcat.size() - n1), tr.fc2, p.fc2, g.fc2);
  g.tokens = nn::bilstm_backward(ds, tr.tokens.cache, p.tokens).params;
  g.features = nn::bilstm_backward(dh, tr.features.cache, p.features).params;
  return g;
}

}  // namespace anxpipe::models
