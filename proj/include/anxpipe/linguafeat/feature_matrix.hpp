#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "anxpipe/corpus.hpp"
#include "anxpipe/linguafeat/registry.hpp"
#include "anxpipe/linguafeat/resources.hpp"

namespace anxpipe::feat {

/// Per-window feature rows of one post (row i = window i).
struct FeatureMatrix {
  std::string post_id;
  Eigen::MatrixXd rows;
  std::vector<std::string> feature_ids;
  bool standardized = false;

  Eigen::Index windows() const { return rows.rows(); }
  Eigen::Index width() const { return rows.cols(); }
};

struct ExtractOptions {
  std::size_t window_len = 1;
  std::size_t stride = 1;
  std::uint64_t seed = 42;  // compression-feature distortion
};

/// Sentence spans [start, min(start + window_len, S)) for start = 0,
/// stride, 2*stride, ... < S. Partial trailing windows are kept.
std::vector<std::pair<std::size_t, std::size_t>> window_spans(std::size_t sentences, std::size_t window_len,
                                                              std::size_t stride);

/// Segments post.clean_text and emits one row per window holding the
/// selected registry entries in registry order. Inside a window with no
/// word token, the word-normalised families (lexical, readability,
/// lexicon) are 0. Throws DataError("no sentences") for empty text.
FeatureMatrix extract_feature_matrix(const corpus::Post& post, const FeatureRegistry& registry,
                                     const ResourceBundle& resources, const ExtractOptions& options);

/// Runs extraction over posts on `jobs` threads. Output order follows input.
std::vector<FeatureMatrix> extract_all(const corpus::PostCollection& posts, const FeatureRegistry& registry,
                                       const ResourceBundle& resources, const ExtractOptions& options,
                                       unsigned jobs = 1);

// ---- CMFX text format --------------------------------------------------
//   #CMFX v1 post_id=<id> n=<N> f=<F>
//   ["feature_id", ...]
//   N lines of F space-separated reals (%.17g)
// A file is a sequence of such blocks.

void write_feature_matrix(std::ostream& out, const FeatureMatrix& m);
void write_feature_matrices(const std::filesystem::path& path, std::span<const FeatureMatrix> matrices);
std::vector<FeatureMatrix> read_feature_matrices(const std::filesystem::path& path);
std::vector<FeatureMatrix> parse_feature_matrices(std::istream& in, const std::string& source_name);

// ---- standardisation ---------------------------------------------------

struct Standardizer {
  std::vector<std::string> feature_ids;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // population standard deviation
};

inline constexpr double kMinScale = 1e-12;

/// Mean and population standard deviation per column over all rows.
Standardizer fit_standardizer(std::span<const FeatureMatrix> train);

/// (x - mean) / scale per column; columns with scale < 1e-12 become 0.
FeatureMatrix apply_standardizer(const FeatureMatrix& m, const Standardizer& s);

// ---- selection -----------------------------------------------------------

/// One row per post: the mean of its window rows.
Eigen::MatrixXd post_level_design(std::span<const FeatureMatrix> matrices);

/// The columns named by `ids`, in the order of `ids`. Throws DataError for
/// an id the matrix lacks.
FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::string>& ids);

}  // namespace anxpipe::feat
