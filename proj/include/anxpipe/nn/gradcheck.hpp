#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "anxpipe/nn/tensor.hpp"

namespace anxpipe::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  Eigen::Index worst_index = -1;
  std::size_t coordinates = 0;
};

inline double relative_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
}

/// Central differences (L(θ+ε) - L(θ-ε)) / 2ε on a random sample of at least
/// `min_coords` coordinates across the listed tensors (every coordinate
/// when there are fewer). `analytic` lists the gradients in the same order.
template <typename Scalar>
GradCheckResult grad_check(const std::vector<std::pair<std::string, Mat<Scalar>*>>& tensors,
                           const std::vector<const Mat<Scalar>*>& analytic, const std::function<Scalar()>& loss,
                           double eps = 1e-5, std::size_t min_coords = 200, std::uint64_t seed = 42) {
  if (tensors.size() != analytic.size()) throw ShapeError("grad_check: tensor and gradient lists differ");
  std::vector<std::pair<std::size_t, Eigen::Index>> coords;
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    if (tensors[k].second->rows() != analytic[k]->rows() || tensors[k].second->cols() != analytic[k]->cols())
      throw ShapeError("grad_check: gradient shape differs for " + tensors[k].first);
    for (Eigen::Index i = 0; i < tensors[k].second->size(); ++i) coords.emplace_back(k, i);
  }
  if (coords.size() > min_coords) {
    Rng rng(seed);
    rng.shuffle(std::span(coords));
    coords.resize(min_coords);
    std::sort(coords.begin(), coords.end());
  }
  GradCheckResult res;
  res.coordinates = coords.size();
  for (const auto& [k, i] : coords) {
    Scalar& theta = tensors[k].second->data()[i];
    const Scalar saved = theta;
    theta = saved + static_cast<Scalar>(eps);
    const double up = static_cast<double>(loss());
    theta = saved - static_cast<Scalar>(eps);
    const double down = static_cast<double>(loss());
    theta = saved;
    const double numeric = (up - down) / (2 * eps);
    const double err = relative_error(static_cast<double>(analytic[k]->data()[i]), numeric);
    if (err > res.max_relative_error || res.worst_index < 0) {
      res.max_relative_error = err;
      res.worst_tensor = tensors[k].first;
      res.worst_index = i;
    }
  }
  return res;
}

/// Convenience form for parameter structs: checks every tensor of params
/// against the matching tensor of grads.
template <typename Params>
GradCheckResult grad_check_params(Params& params, const Params& grads,
                                  const std::function<typename Params::scalar_type()>& loss, double eps = 1e-5,
                                  std::size_t min_coords = 200, std::uint64_t seed = 42) {
  using S = typename Params::scalar_type;
  const auto g = tensor_list(grads);
  std::vector<const Mat<S>*> analytic;
  for (const auto& [name, t] : g) analytic.push_back(t);
  return grad_check<S>(tensor_list(params), analytic, loss, eps, min_coords, seed);
}

}  // namespace anxpipe::nn
