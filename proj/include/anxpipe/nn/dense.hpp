#pragma once

#include <string>

#include "anxpipe/nn/tensor.hpp"

namespace anxpipe::nn {

enum class Activation { none, relu };

/// y = act(W x + b).
template <typename Scalar>
struct DenseParams {
  using scalar_type = Scalar;
  Mat<Scalar> W;  // out x in
  Mat<Scalar> b;  // out x 1
  Activation activation = Activation::none;

  static DenseParams zeros(Eigen::Index in, Eigen::Index out, Activation act) {
    return {Mat<Scalar>::Zero(out, in), Mat<Scalar>::Zero(out, 1), act};
  }
  static DenseParams init(Eigen::Index in, Eigen::Index out, Activation act, Rng& rng) {
    DenseParams p = zeros(in, out, act);
    glorot_uniform(p.W, in, out, rng);
    return p;
  }

  Eigen::Index in_dim() const { return W.cols(); }
  Eigen::Index out_dim() const { return W.rows(); }

  template <typename F>
  void for_each(F&& f, const std::string& prefix = "") {
    f(prefix + "W", W);
    f(prefix + "b", b);
  }
  template <typename F>
  void for_each(F&& f, const std::string& prefix = "") const {
    f(prefix + "W", W);
    f(prefix + "b", b);
  }
};

/// Pre-activation values kept for the backward pass.
template <typename Scalar>
struct DenseCache {
  Vec<Scalar> x;
  Vec<Scalar> pre;
};

template <typename Scalar>
Vec<Scalar> dense_forward(const Vec<Scalar>& x, const DenseParams<Scalar>& p, DenseCache<Scalar>* cache = nullptr) {
  if (p.b.rows() != p.W.rows() || p.b.cols() != 1) throw ShapeError("dense: bias shape mismatch");
  if (x.size() != p.W.cols())
    throw ShapeError("dense: input length " + std::to_string(x.size()) + " != " + std::to_string(p.W.cols()));
  Vec<Scalar> pre = p.W * x + p.b.col(0);
  Vec<Scalar> y = p.activation == Activation::relu ? Vec<Scalar>(pre.cwiseMax(Scalar(0))) : pre;
  if (cache) {
    cache->x = x;
    cache->pre = std::move(pre);
  }
  return y;
}

/// Accumulates dW, db into grads and returns dL/dx.
template <typename Scalar>
Vec<Scalar> dense_backward(const Vec<Scalar>& dy, const DenseCache<Scalar>& cache, const DenseParams<Scalar>& p,
                           DenseParams<Scalar>& grads) {
  if (dy.size() != p.W.rows() || cache.pre.size() != p.W.rows() || cache.x.size() != p.W.cols())
    throw ShapeError("dense_backward: shape mismatch");
  Vec<Scalar> dpre = dy;
  if (p.activation == Activation::relu)
    for (Eigen::Index i = 0; i < dpre.size(); ++i)
      if (!(cache.pre[i] > Scalar(0))) dpre[i] = Scalar(0);
  grads.W.noalias() += dpre * cache.x.transpose();
  grads.b.col(0) += dpre;
  return p.W.transpose() * dpre;
}

}  // namespace anxpipe::nn
