#pragma once

#include <cmath>
#include <vector>

#include "anxpipe/nn/tensor.hpp"

namespace anxpipe::nn {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename Params>
struct AdamState {
  Params m;
  Params v;
  long step = 0;

  explicit AdamState(const Params& like) : m(zeros_like(like)), v(zeros_like(like)) {}
};

/// One bias-corrected Adam update:
///   m = β1 m + (1-β1) g,  v = β2 v + (1-β2) g²
///   θ -= lr · m̂ / (sqrt(v̂) + ε),  m̂ = m/(1-β1^t),  v̂ = v/(1-β2^t)
template <typename Params>
void adam_step(Params& params, const Params& grads, AdamState<Params>& state, const AdamHyper& hyper = {}) {
  require_same_shapes(params, grads, "adam_step");
  require_same_shapes(params, state.m, "adam_step");
  using S = typename Params::scalar_type;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const S c1 = static_cast<S>(1.0 - std::pow(hyper.beta1, t));
  const S c2 = static_cast<S>(1.0 - std::pow(hyper.beta2, t));
  const S b1 = static_cast<S>(hyper.beta1), b2 = static_cast<S>(hyper.beta2);
  const S lr = static_cast<S>(hyper.lr), eps = static_cast<S>(hyper.eps);
  auto p = tensor_list(params);
  auto g = tensor_list(grads);
  auto m = tensor_list(state.m);
  auto v = tensor_list(state.v);
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto& mk = *m[k].second;
    auto& vk = *v[k].second;
    const auto& gk = *g[k].second;
    mk = b1 * mk + (S(1) - b1) * gk;
    vk = b2 * vk + (S(1) - b2) * gk.cwiseProduct(gk);
    p[k].second->array() -= lr * (mk.array() / c1) / ((vk.array() / c2).sqrt() + eps);
  }
}

/// Rescales grads so their global L2 norm is <= max_norm; returns the norm
/// before clipping.
template <typename Params>
double clip_global_norm(Params& grads, double max_norm) {
  const double norm = std::sqrt(squared_norm(grads));
  if (norm > max_norm && norm > 0) scale_all(grads, static_cast<typename Params::scalar_type>(max_norm / norm));
  return norm;
}

}  // namespace anxpipe::nn
