#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "anxpipe/error.hpp"
#include "anxpipe/rng.hpp"

namespace anxpipe::nn {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Two-dimensional tensor; vectors are stored as n x 1.
using Tensor2 = Mat<double>;

/// A parameter set is any type with
///   template <class F> void for_each(F&& f)        f(const std::string&, Mat<Scalar>&)
///   template <class F> void for_each(F&& f) const  f(const std::string&, const Mat<Scalar>&)
/// visiting tensors in a fixed order, and a member alias scalar_type.
template <typename Params>
auto tensor_list(Params& p) {
  using S = typename std::remove_const_t<Params>::scalar_type;
  using M = std::conditional_t<std::is_const_v<Params>, const Mat<S>, Mat<S>>;
  std::vector<std::pair<std::string, M*>> out;
  p.for_each([&](const std::string& name, M& t) { out.emplace_back(name, &t); });
  return out;
}

template <typename Params>
Params zeros_like(const Params& p) {
  Params z = p;
  z.for_each([](const std::string&, auto& t) { t.setZero(); });
  return z;
}

template <typename Params>
bool all_finite(const Params& p) {
  bool ok = true;
  p.for_each([&](const std::string&, const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

template <typename Params>
void require_same_shapes(const Params& a, const Params& b, const char* what) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes;
  a.for_each([&](const std::string&, const auto& t) { shapes.emplace_back(t.rows(), t.cols()); });
  std::size_t k = 0;
  bool ok = true;
  b.for_each([&](const std::string&, const auto& t) {
    ok = ok && k < shapes.size() && shapes[k] == std::make_pair(t.rows(), t.cols());
    ++k;
  });
  if (!ok || k != shapes.size()) throw ShapeError(std::string(what) + ": tensor shapes differ");
}

template <typename Params>
double squared_norm(const Params& p) {
  double s = 0;
  p.for_each([&](const std::string&, const auto& t) { s += static_cast<double>(t.squaredNorm()); });
  return s;
}

template <typename Params, typename Scalar>
void scale_all(Params& p, Scalar factor) {
  p.for_each([&](const std::string&, auto& t) { t *= factor; });
}

/// a += b, tensorwise.
template <typename Params>
void accumulate(Params& a, const Params& b) {
  require_same_shapes(a, b, "accumulate");
  const auto src = tensor_list(b);
  std::size_t k = 0;
  a.for_each([&](const std::string&, auto& t) { t += *src[k++].second; });
}

/// Cheap content fingerprint, used to detect a cache taken against
/// different parameter values.
template <typename Params>
std::uint64_t fingerprint(const Params& p) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  p.for_each([&](const std::string&, const auto& t) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(t.rows()) ^ (static_cast<std::uint64_t>(t.cols()) << 32));
    const auto* bytes = reinterpret_cast<const unsigned char*>(t.data());
    const std::size_t n = static_cast<std::size_t>(t.size()) * sizeof(*t.data());
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
      std::uint64_t w;
      std::memcpy(&w, bytes + i, 8);
      h = (h ^ w) * 0x9e3779b97f4a7c15ULL;
      h ^= h >> 29;
    }
    for (; i < n; ++i) h = (h ^ bytes[i]) * 0x100000001b3ULL;
  });
  return splitmix64(h);
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

/// Uniform Glorot initialisation in [-a, a], a = sqrt(6 / (fan_in + fan_out)).
template <typename Scalar>
void glorot_uniform(Mat<Scalar>& m, Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<Scalar>(rng.uniform(-a, a));
}

}  // namespace anxpipe::nn
