#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "anxpipe/prediction.hpp"

namespace anxpipe::exchange {

inline constexpr std::uint32_t kEmbeddingDim = 768;
inline constexpr std::uint32_t kMaxTokens = 512;
inline constexpr std::uint32_t kEmbeddingVersion = 1;

/// Token-embedding sequence of one post from an external encoder.
struct EmbeddingSequence {
  std::string post_id;
  std::string model_name;
  Eigen::MatrixXd vectors;  // M x 768, values representable in f32

  Eigen::Index tokens() const { return vectors.rows(); }
};

// TEMB layout, integers little-endian:
//   "TEMB"  u32 version(=1)  u64 count
//   count x { u32 id_len, id, u32 name_len, name, u32 M, u32 dim, M*dim f32 (row-major) }

std::string encode_embeddings(std::span<const EmbeddingSequence> seqs);
std::vector<EmbeddingSequence> decode_embeddings(const std::string& bytes);

void write_embeddings(std::span<const EmbeddingSequence> seqs, const std::filesystem::path& path);
std::vector<EmbeddingSequence> read_embeddings(const std::filesystem::path& path);

/// Probabilities of one base model, keyed by post id.
struct BasePredictionSet {
  std::string model_id;
  std::map<std::string, double> entries;
};

/// CSV with a header containing post_id and prob_positive (other columns
/// ignored). Duplicate ids and probabilities outside [0,1] raise DataError
/// naming the line.
BasePredictionSet parse_predictions(std::istream& in, const std::string& source, const std::string& model_id);
BasePredictionSet read_predictions(const std::filesystem::path& path, const std::string& model_id = "");

/// Writes post_id,prob_positive,label_hat with %.17g probabilities.
void write_predictions(std::ostream& out, std::span<const Prediction> preds);
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds);

}  // namespace anxpipe::exchange
