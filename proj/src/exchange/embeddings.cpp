#include <cmath>

#include "anxpipe/binio.hpp"
#include "anxpipe/error.hpp"
#include "anxpipe/exchange.hpp"

namespace anxpipe::exchange {

std::string encode_embeddings(std::span<const EmbeddingSequence> seqs) {
  binio::Writer w;
  w.bytes("TEMB");
  w.u32(kEmbeddingVersion);
  w.u64(seqs.size());
  for (const auto& s : seqs) {
    const auto M = s.vectors.rows();
    if (M < 1 || M > kMaxTokens) throw DataError("embedding record " + s.post_id + ": token count out of range");
    if (s.vectors.cols() != kEmbeddingDim) throw DataError("unexpected embedding dim " + std::to_string(s.vectors.cols()));
    if (!s.vectors.allFinite()) throw DataError("embedding record " + s.post_id + ": non-finite value");
    w.u32(static_cast<std::uint32_t>(s.post_id.size()));
    w.bytes(s.post_id);
    w.u32(static_cast<std::uint32_t>(s.model_name.size()));
    w.bytes(s.model_name);
    w.u32(static_cast<std::uint32_t>(M));
    w.u32(kEmbeddingDim);
    for (Eigen::Index i = 0; i < M; ++i)
      for (Eigen::Index j = 0; j < s.vectors.cols(); ++j) w.f32(static_cast<float>(s.vectors(i, j)));
  }
  return w.take();
}

std::vector<EmbeddingSequence> decode_embeddings(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "TEMB") != 0) throw DataError("bad embedding file magic");
  binio::Reader r(bytes, "embedding file");
  r.bytes(4, "magic");
  const auto version = r.u32("version");
  if (version != kEmbeddingVersion) throw DataError("unsupported embedding file version " + std::to_string(version));
  const auto count = r.u64("record count");
  // smallest record: four u32 fields
  r.require(count, 16, "record count");
  std::vector<EmbeddingSequence> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t k = 0; k < count; ++k) {
    EmbeddingSequence s;
    s.post_id = std::string(r.bytes(r.u32("id length"), "id"));
    s.model_name = std::string(r.bytes(r.u32("name length"), "model name"));
    const auto M = r.u32("token count");
    const auto dim = r.u32("dim");
    if (dim != kEmbeddingDim) throw DataError("unexpected embedding dim " + std::to_string(dim) + " in record " + s.post_id);
    if (M == 0 || M > kMaxTokens)
      throw DataError("record " + s.post_id + ": token count " + std::to_string(M) + " outside [1, 512]");
    r.require(static_cast<std::uint64_t>(M) * dim, 4, "embedding payload");
    s.vectors.resize(M, dim);
    for (std::uint32_t i = 0; i < M; ++i)
      for (std::uint32_t j = 0; j < dim; ++j) {
        const float v = r.f32("embedding payload");
        if (!std::isfinite(v)) throw DataError("record " + s.post_id + ": non-finite embedding value");
        s.vectors(i, j) = v;
      }
    out.push_back(std::move(s));
  }
  if (r.remaining() != 0) throw DataError("embedding file: trailing bytes after last record");
  return out;
}

void write_embeddings(std::span<const EmbeddingSequence> seqs, const std::filesystem::path& path) {
  binio::write_file_bytes(path.string(), encode_embeddings(seqs));
}

std::vector<EmbeddingSequence> read_embeddings(const std::filesystem::path& path) {
  return decode_embeddings(binio::read_file_bytes(path.string()));
}

}  // namespace anxpipe::exchange
