#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "anxpipe/ensemble/learners.hpp"

namespace anxpipe::feat {

/// Recursive feature elimination with the L2 logistic learner.
///
/// Columns are z-scored once up front, so coefficient magnitudes are
/// comparable. Each round refits on the surviving columns and drops the
/// `step` columns with the smallest |coefficient| (ties: higher column
/// index first), never going below `target_k`. Returns a mask with exactly
/// target_k entries set.
///
/// Throws DataError when target_k >= X.cols(), target_k == 0, step == 0,
/// y has a class with fewer than 2 rows, or sizes disagree.
std::vector<bool> recursive_feature_elimination(const Eigen::MatrixXd& X, std::span<const int> y,
                                                std::size_t target_k, std::size_t step,
                                                const learn::LogisticConfig& config = {});

struct FeatureMask {
  std::vector<std::string> registry_ids;
  std::vector<std::string> selected_ids;
};

/// JSON: {"registry": [...], "selected": [...], "target_k": k}
void write_mask(const std::filesystem::path& path, const FeatureMask& mask);
FeatureMask read_mask(const std::filesystem::path& path);

}  // namespace anxpipe::feat
