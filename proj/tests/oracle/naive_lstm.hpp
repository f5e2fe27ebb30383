#pragma once

// Step-by-step scalar BiLSTM used as an oracle for the Eigen implementation.
// Plain loops over std::vector, no shared helpers with the library.

#include <cmath>
#include <vector>

#include "anxpipe/nn/lstm.hpp"

namespace anxpipe::oracle {

using Series = std::vector<std::vector<double>>;  // [t][unit]

inline double naive_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// One direction over `xs` in the given order; returns h for every step.
inline Series naive_lstm(const Series& xs, const nn::LstmLayerParams<double>& p) {
  const auto H = static_cast<std::size_t>(p.hidden_dim());
  const auto D = static_cast<std::size_t>(p.input_dim());
  std::vector<double> h(H, 0.0), c(H, 0.0);
  Series out;
  for (const auto& x : xs) {
    std::vector<double> nh(H), nc(H);
    for (std::size_t u = 0; u < H; ++u) {
      double z[4];
      for (int k = 0; k < 4; ++k) {
        double acc = p.bias[k](static_cast<Eigen::Index>(u), 0);
        for (std::size_t d = 0; d < D; ++d)
          acc += p.w_in[k](static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(d)) * x[d];
        for (std::size_t v = 0; v < H; ++v)
          acc += p.w_hid[k](static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) * h[v];
        z[k] = acc;
      }
      const double i = naive_sigmoid(z[0]);
      const double f = naive_sigmoid(z[1]);
      const double g = std::tanh(z[2]);
      const double o = naive_sigmoid(z[3]);
      nc[u] = f * c[u] + i * g;
      nh[u] = o * std::tanh(nc[u]);
    }
    h = nh;
    c = nc;
    out.push_back(h);
  }
  return out;
}

struct NaiveBiLstm {
  Series outputs;             // [t][2H]
  std::vector<double> final;  // forward last step, then backward after the whole reversed pass
};

inline NaiveBiLstm naive_bilstm(const Series& seq, const nn::BiLstmParams<double>& p) {
  Series layer_in = seq;
  std::vector<double> final;
  for (std::size_t l = 0; l < p.layers(); ++l) {
    const Series fwd = naive_lstm(layer_in, p.forward[l]);
    Series reversed(layer_in.rbegin(), layer_in.rend());
    const Series bwd_rev = naive_lstm(reversed, p.backward[l]);
    const std::size_t N = layer_in.size();
    Series next(N);
    for (std::size_t t = 0; t < N; ++t) {
      next[t] = fwd[t];
      const auto& b = bwd_rev[N - 1 - t];
      next[t].insert(next[t].end(), b.begin(), b.end());
    }
    final = fwd.back();
    final.insert(final.end(), bwd_rev.back().begin(), bwd_rev.back().end());
    layer_in = next;
  }
  return {layer_in, final};
}

}  // namespace anxpipe::oracle
