#pragma once

#include <array>
#include <string>
#include <vector>

#include "anxpipe/nn/tensor.hpp"

namespace anxpipe::nn {

enum Gate : int { kInput = 0, kForget = 1, kCell = 2, kOutput = 3 };
inline constexpr const char* kGateSuffix[4] = {"i", "f", "g", "o"};

/// One direction of one layer:
///   i = σ(W_ii x + W_hi h + b_i)    f = σ(W_if x + W_hf h + b_f)
///   g = tanh(W_ig x + W_hg h + b_g) o = σ(W_io x + W_ho h + b_o)
///   c' = f ∘ c + i ∘ g              h' = o ∘ tanh(c')
template <typename Scalar>
struct LstmLayerParams {
  using scalar_type = Scalar;
  std::array<Mat<Scalar>, 4> w_in;   // H x D each
  std::array<Mat<Scalar>, 4> w_hid;  // H x H each
  std::array<Mat<Scalar>, 4> bias;   // H x 1 each

  static LstmLayerParams zeros(Eigen::Index input_dim, Eigen::Index hidden_dim) {
    LstmLayerParams p;
    for (int k = 0; k < 4; ++k) {
      p.w_in[k] = Mat<Scalar>::Zero(hidden_dim, input_dim);
      p.w_hid[k] = Mat<Scalar>::Zero(hidden_dim, hidden_dim);
      p.bias[k] = Mat<Scalar>::Zero(hidden_dim, 1);
    }
    return p;
  }

  Eigen::Index input_dim() const { return w_in[0].cols(); }
  Eigen::Index hidden_dim() const { return w_in[0].rows(); }

  template <typename F>
  void for_each(F&& f, const std::string& prefix = "") {
    for (int k = 0; k < 4; ++k) f(prefix + "W_i" + kGateSuffix[k], w_in[k]);
    for (int k = 0; k < 4; ++k) f(prefix + "W_h" + kGateSuffix[k], w_hid[k]);
    for (int k = 0; k < 4; ++k) f(prefix + "b_" + kGateSuffix[k], bias[k]);
  }
  template <typename F>
  void for_each(F&& f, const std::string& prefix = "") const {
    for (int k = 0; k < 4; ++k) f(prefix + "W_i" + kGateSuffix[k], w_in[k]);
    for (int k = 0; k < 4; ++k) f(prefix + "W_h" + kGateSuffix[k], w_hid[k]);
    for (int k = 0; k < 4; ++k) f(prefix + "b_" + kGateSuffix[k], bias[k]);
  }

  void validate() const {
    const auto H = hidden_dim(), D = input_dim();
    for (int k = 0; k < 4; ++k) {
      if (w_in[k].rows() != H || w_in[k].cols() != D || w_hid[k].rows() != H || w_hid[k].cols() != H ||
          bias[k].rows() != H || bias[k].cols() != 1)
        throw ShapeError("inconsistent LSTM layer shapes");
    }
  }
};

template <typename Scalar>
struct BiLstmParams {
  using scalar_type = Scalar;
  std::vector<LstmLayerParams<Scalar>> forward;
  std::vector<LstmLayerParams<Scalar>> backward;

  static BiLstmParams zeros(Eigen::Index input_dim, Eigen::Index hidden, std::size_t layers) {
    BiLstmParams p;
    for (std::size_t l = 0; l < layers; ++l) {
      const Eigen::Index d = l == 0 ? input_dim : 2 * hidden;
      p.forward.push_back(LstmLayerParams<Scalar>::zeros(d, hidden));
      p.backward.push_back(LstmLayerParams<Scalar>::zeros(d, hidden));
    }
    return p;
  }

  /// Glorot-uniform weights per gate, zero biases except forget = 1.
  static BiLstmParams init(Eigen::Index input_dim, Eigen::Index hidden, std::size_t layers, Rng& rng) {
    BiLstmParams p = zeros(input_dim, hidden, layers);
    for (std::size_t l = 0; l < layers; ++l) {
      for (auto* dir : {&p.forward[l], &p.backward[l]}) {
        for (int k = 0; k < 4; ++k) {
          glorot_uniform(dir->w_in[k], dir->input_dim(), hidden, rng);
          glorot_uniform(dir->w_hid[k], hidden, hidden, rng);
        }
        dir->bias[kForget].setConstant(Scalar(1));
      }
    }
    return p;
  }

  std::size_t layers() const { return forward.size(); }
  Eigen::Index hidden_dim() const { return forward.empty() ? 0 : forward[0].hidden_dim(); }
  Eigen::Index input_dim() const { return forward.empty() ? 0 : forward[0].input_dim(); }

  template <typename F>
  void for_each(F&& f, const std::string& prefix = "") {
    for (std::size_t l = 0; l < forward.size(); ++l) {
      forward[l].for_each(f, prefix + "l" + std::to_string(l) + ".fwd.");
      backward[l].for_each(f, prefix + "l" + std::to_string(l) + ".bwd.");
    }
  }
  template <typename F>
  void for_each(F&& f, const std::string& prefix = "") const {
    for (std::size_t l = 0; l < forward.size(); ++l) {
      forward[l].for_each(f, prefix + "l" + std::to_string(l) + ".fwd.");
      backward[l].for_each(f, prefix + "l" + std::to_string(l) + ".bwd.");
    }
  }

  void validate() const {
    if (forward.empty() || forward.size() != backward.size()) throw ShapeError("BiLSTM needs L >= 1 layer pairs");
    const auto H = hidden_dim();
    for (std::size_t l = 0; l < forward.size(); ++l) {
      forward[l].validate();
      backward[l].validate();
      const Eigen::Index d = l == 0 ? input_dim() : 2 * H;
      for (const auto* dir : {&forward[l], &backward[l]})
        if (dir->hidden_dim() != H || dir->input_dim() != d) throw ShapeError("inconsistent BiLSTM layer dims");
    }
  }
};

/// Activations of one direction over one sequence, columns in processing order.
template <typename Scalar>
struct LstmTrace {
  Mat<Scalar> x;                  // D x N inputs
  std::array<Mat<Scalar>, 4> gate;  // H x N post-activation gates
  Mat<Scalar> c;                  // H x N cell states
  Mat<Scalar> h;                  // H x N hidden states
};

template <typename Scalar>
LstmTrace<Scalar> lstm_run(const Mat<Scalar>& x, const LstmLayerParams<Scalar>& p) {
  using std::tanh;
  const Eigen::Index H = p.hidden_dim(), N = x.cols();
  LstmTrace<Scalar> tr;
  tr.x = x;
  for (auto& g : tr.gate) g.resize(H, N);
  tr.c.resize(H, N);
  tr.h.resize(H, N);
  Vec<Scalar> h = Vec<Scalar>::Zero(H), c = Vec<Scalar>::Zero(H);
  for (Eigen::Index t = 0; t < N; ++t) {
    std::array<Vec<Scalar>, 4> z;
    for (int k = 0; k < 4; ++k) z[k] = p.w_in[k] * x.col(t) + p.w_hid[k] * h + p.bias[k].col(0);
    for (Eigen::Index r = 0; r < H; ++r) {
      const Scalar i = sigmoid(z[kInput][r]), f = sigmoid(z[kForget][r]);
      const Scalar g = tanh(z[kCell][r]), o = sigmoid(z[kOutput][r]);
      c[r] = f * c[r] + i * g;
      h[r] = o * tanh(c[r]);
      tr.gate[kInput](r, t) = i;
      tr.gate[kForget](r, t) = f;
      tr.gate[kCell](r, t) = g;
      tr.gate[kOutput](r, t) = o;
    }
    tr.c.col(t) = c;
    tr.h.col(t) = h;
  }
  return tr;
}

/// Backpropagation through time for one direction. dh holds the upstream
/// gradient on every output h_t (H x N). Accumulates into grads and returns
/// the gradient on the inputs (D x N).
template <typename Scalar>
Mat<Scalar> lstm_backprop(const LstmTrace<Scalar>& tr, const Mat<Scalar>& dh_out, const LstmLayerParams<Scalar>& p,
                          LstmLayerParams<Scalar>& grads) {
  using std::tanh;
  const Eigen::Index H = p.hidden_dim(), N = tr.x.cols();
  Mat<Scalar> dx = Mat<Scalar>::Zero(p.input_dim(), N);
  Vec<Scalar> dh_next = Vec<Scalar>::Zero(H), dc_next = Vec<Scalar>::Zero(H);
  std::array<Vec<Scalar>, 4> dz;
  for (auto& v : dz) v.resize(H);
  for (Eigen::Index t = N - 1; t >= 0; --t) {
    for (Eigen::Index r = 0; r < H; ++r) {
      const Scalar i = tr.gate[kInput](r, t), f = tr.gate[kForget](r, t);
      const Scalar g = tr.gate[kCell](r, t), o = tr.gate[kOutput](r, t);
      const Scalar c = tr.c(r, t);
      const Scalar c_prev = t > 0 ? tr.c(r, t - 1) : Scalar(0);
      const Scalar tc = tanh(c);
      const Scalar dh = dh_out(r, t) + dh_next[r];
      const Scalar dc = dc_next[r] + dh * o * (Scalar(1) - tc * tc);
      dz[kOutput][r] = dh * tc * o * (Scalar(1) - o);
      dz[kInput][r] = dc * g * i * (Scalar(1) - i);
      dz[kCell][r] = dc * i * (Scalar(1) - g * g);
      dz[kForget][r] = dc * c_prev * f * (Scalar(1) - f);
      dc_next[r] = dc * f;
    }
    dh_next.setZero();
    for (int k = 0; k < 4; ++k) {
      grads.w_in[k].noalias() += dz[k] * tr.x.col(t).transpose();
      if (t > 0) grads.w_hid[k].noalias() += dz[k] * tr.h.col(t - 1).transpose();
      grads.bias[k].col(0) += dz[k];
      dx.col(t).noalias() += p.w_in[k].transpose() * dz[k];
      dh_next.noalias() += p.w_hid[k].transpose() * dz[k];
    }
  }
  return dx;
}

template <typename Scalar>
struct BiLstmCache {
  const BiLstmParams<Scalar>* params = nullptr;
  std::uint64_t params_fingerprint = 0;
  Eigen::Index steps = 0;
  std::vector<LstmTrace<Scalar>> fwd;  // per layer
  std::vector<LstmTrace<Scalar>> bwd;  // per layer, columns in reversed time
};

template <typename Scalar>
struct BiLstmOutput {
  Mat<Scalar> outputs;  // N x 2H, row t = [h_f(t); h_b(t)] of the top layer
  Vec<Scalar> final;    // 2H: forward state after t = N-1, backward state after t = 0
  BiLstmCache<Scalar> cache;
};

template <typename Scalar>
Mat<Scalar> reverse_columns(const Mat<Scalar>& m) {
  return m.rowwise().reverse();
}

/// seq is N x D (one row per time step).
template <typename Scalar>
BiLstmOutput<Scalar> bilstm_forward(const Mat<Scalar>& seq, const BiLstmParams<Scalar>& params) {
  params.validate();
  if (seq.rows() == 0) throw ShapeError("bilstm_forward: empty sequence");
  if (seq.cols() != params.input_dim())
    throw ShapeError("bilstm_forward: input width " + std::to_string(seq.cols()) + " != " +
                     std::to_string(params.input_dim()));
  const Eigen::Index H = params.hidden_dim(), N = seq.rows();
  BiLstmOutput<Scalar> out;
  out.cache.params = &params;
  out.cache.params_fingerprint = fingerprint(params);
  out.cache.steps = N;
  Mat<Scalar> layer_in = seq.transpose();
  for (std::size_t l = 0; l < params.layers(); ++l) {
    auto f = lstm_run(layer_in, params.forward[l]);
    auto b = lstm_run(reverse_columns(layer_in), params.backward[l]);
    Mat<Scalar> next(2 * H, N);
    next.topRows(H) = f.h;
    next.bottomRows(H) = reverse_columns(b.h);
    out.cache.fwd.push_back(std::move(f));
    out.cache.bwd.push_back(std::move(b));
    layer_in = std::move(next);
  }
  out.outputs = layer_in.transpose();
  out.final.resize(2 * H);
  out.final.head(H) = out.cache.fwd.back().h.col(N - 1);
  out.final.tail(H) = out.cache.bwd.back().h.col(N - 1);
  return out;
}

template <typename Scalar>
struct BiLstmGrads {
  BiLstmParams<Scalar> params;
  Mat<Scalar> input;  // N x D
};

/// Gradients of a loss whose upstream gradient is grad_final on the final
/// state and, optionally, grad_outputs (N x 2H) on the per-step outputs.
template <typename Scalar>
BiLstmGrads<Scalar> bilstm_backward(const Vec<Scalar>& grad_final, const BiLstmCache<Scalar>& cache,
                                    const BiLstmParams<Scalar>& params, const Mat<Scalar>* grad_outputs = nullptr) {
  if (cache.params != &params || cache.fwd.size() != params.layers() || cache.steps == 0)
    throw ShapeError("bilstm_backward: cache does not belong to these parameters");
  if (cache.params_fingerprint != fingerprint(params))
    throw ShapeError("bilstm_backward: stale cache (parameters changed since forward)");
  const Eigen::Index H = params.hidden_dim(), N = cache.steps;
  if (grad_final.size() != 2 * H) throw ShapeError("bilstm_backward: grad_final must have length 2H");
  if (grad_outputs && (grad_outputs->rows() != N || grad_outputs->cols() != 2 * H))
    throw ShapeError("bilstm_backward: grad_outputs must be N x 2H");

  BiLstmGrads<Scalar> g;
  g.params = zeros_like(params);
  Mat<Scalar> dy = grad_outputs ? Mat<Scalar>(grad_outputs->transpose()) : Mat<Scalar>::Zero(2 * H, N);
  dy.col(N - 1).head(H) += grad_final.head(H);
  dy.col(0).tail(H) += grad_final.tail(H);
  for (std::size_t l = params.layers(); l-- > 0;) {
    const Mat<Scalar> dh_f = dy.topRows(H);
    const Mat<Scalar> dh_b = reverse_columns<Scalar>(dy.bottomRows(H));
    Mat<Scalar> dx = lstm_backprop(cache.fwd[l], dh_f, params.forward[l], g.params.forward[l]);
    dx += reverse_columns(lstm_backprop(cache.bwd[l], dh_b, params.backward[l], g.params.backward[l]));
    dy = std::move(dx);
  }
  g.input = dy.transpose();
  return g;
}

}  // namespace anxpipe::nn
