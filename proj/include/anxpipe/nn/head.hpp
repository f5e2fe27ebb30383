#pragma once

#include <cmath>

#include "anxpipe/nn/dense.hpp"

namespace anxpipe::nn {

/// Two-class softmax via log-sum-exp; returns (p0, p1).
template <typename Scalar>
Vec<Scalar> softmax2(const Vec<Scalar>& logits) {
  using std::exp;
  if (logits.size() != 2) throw ShapeError("softmax2 needs two logits");
  const Scalar m = std::max(logits[0], logits[1]);
  const Scalar e0 = exp(logits[0] - m), e1 = exp(logits[1] - m);
  Vec<Scalar> p(2);
  const Scalar s = e0 + e1;
  p[0] = e0 / s;
  p[1] = e1 / s;
  return p;
}

template <typename Scalar>
Scalar log_sum_exp2(const Vec<Scalar>& logits) {
  using std::exp;
  using std::log;
  const Scalar m = std::max(logits[0], logits[1]);
  return m + log(exp(logits[0] - m) + exp(logits[1] - m));
}

/// Probabilities of the linear head W (2 x dim), b (2).
template <typename Scalar>
Vec<Scalar> binary_head_forward(const Vec<Scalar>& x, const Mat<Scalar>& W, const Vec<Scalar>& b) {
  if (W.rows() != 2 || b.size() != 2 || W.cols() != x.size()) throw ShapeError("binary head shape mismatch");
  return softmax2<Scalar>(W * x + b);
}

/// -log p_label from probabilities.
template <typename Scalar>
Scalar cross_entropy(const Vec<Scalar>& probs, int label) {
  using std::log;
  return -log(probs[label == 1 ? 1 : 0]);
}

/// -log softmax(logits)[label], computed stably.
template <typename Scalar>
Scalar cross_entropy_logits(const Vec<Scalar>& logits, int label) {
  return log_sum_exp2(logits) - logits[label == 1 ? 1 : 0];
}

/// d(cross_entropy_logits)/d logits = p - onehot(label).
template <typename Scalar>
Vec<Scalar> cross_entropy_grad(const Vec<Scalar>& logits, int label) {
  Vec<Scalar> g = softmax2(logits);
  g[label == 1 ? 1 : 0] -= Scalar(1);
  return g;
}

}  // namespace anxpipe::nn
