#pragma once

#include <string>

namespace anxpipe {

/// Classifier output for one post; label_hat = 1 iff prob_positive >= 0.5.
struct Prediction {
  std::string post_id;
  double prob_positive = 0.5;
  int label_hat = 1;

  static Prediction from_probability(std::string post_id, double p) {
    return {std::move(post_id), p, p >= 0.5 ? 1 : 0};
  }
};

}  // namespace anxpipe
