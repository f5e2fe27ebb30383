#include <algorithm>
#include <cmath>
#include <numeric>

#include "anxpipe/ensemble/learners.hpp"
#include "anxpipe/error.hpp"

namespace anxpipe::learn {

double BoostedStumps::score(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double s = base_score;
  for (const auto& st : stumps) s += shrinkage * st.eval(x);
  return s;
}

BoostedStumps fit_boosted_stumps(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const BoostingConfig& config) {
  const Eigen::Index n = X.rows();
  if (n != y.size()) throw DataError("boosting: row count does not match labels");
  if (n == 0) throw DataError("boosting: empty design");
  const double rate = std::clamp(y.mean(), 1e-6, 1.0 - 1e-6);

  BoostedStumps model;
  model.shrinkage = config.shrinkage;
  model.base_score = std::log(rate / (1.0 - rate));
  Eigen::VectorXd score = Eigen::VectorXd::Constant(n, model.base_score);
  model.train_loss.push_back(mean_log_loss(score, y));

  // per-feature row order, computed once
  std::vector<std::vector<Eigen::Index>> order(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    auto& o = order[static_cast<std::size_t>(j)];
    o.resize(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), Eigen::Index{0});
    std::stable_sort(o.begin(), o.end(), [&](Eigen::Index a, Eigen::Index b) { return X(a, j) < X(b, j); });
  }

  for (int round = 0; round < config.rounds; ++round) {
    const Eigen::VectorXd r = y - score.unaryExpr([](double z) { return sigmoid(z); });
    const double total = r.sum();
    Stump best;
    bool found = false;
    double best_gain = -INFINITY;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const auto& o = order[static_cast<std::size_t>(j)];
      double left_sum = 0;
      for (Eigen::Index k = 0; k + 1 < n; ++k) {
        left_sum += r[o[static_cast<std::size_t>(k)]];
        const double a = X(o[static_cast<std::size_t>(k)], j);
        const double b = X(o[static_cast<std::size_t>(k + 1)], j);
        if (a == b) continue;
        const double nl = static_cast<double>(k + 1), nr = static_cast<double>(n - k - 1);
        const double right_sum = total - left_sum;
        // SSE reduction of a two-leaf mean fit
        const double gain = left_sum * left_sum / nl + right_sum * right_sum / nr;
        if (gain > best_gain) {
          best_gain = gain;
          best = {j, 0.5 * (a + b), left_sum / nl, right_sum / nr};
          found = true;
        }
      }
    }
    if (!found) {
      // every column constant: a single leaf
      best = {0, INFINITY, total / static_cast<double>(n), total / static_cast<double>(n)};
    }
    model.stumps.push_back(best);
    for (Eigen::Index i = 0; i < n; ++i) score[i] += config.shrinkage * best.eval(X.row(i).transpose());
    model.train_loss.push_back(mean_log_loss(score, y));
  }
  return model;
}

}  // namespace anxpipe::learn
