#include "anxpipe/nn/checkpoint.hpp"

#include "anxpipe/binio.hpp"

namespace anxpipe::nn {

std::string encode_checkpoint(const std::vector<NamedTensor>& tensors) {
  binio::Writer w;
  w.bytes("NNCK");
  w.u32(kCheckpointVersion);
  w.u64(tensors.size());
  for (const auto& t : tensors) {
    std::uint64_t n = 1;
    for (auto d : t.dims) n *= d;
    if (n != t.data.size()) throw ShapeError("checkpoint tensor " + t.name + ": dims do not match data length");
    w.u32(static_cast<std::uint32_t>(t.name.size()));
    w.bytes(t.name);
    w.u32(static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) w.u64(d);
    for (double v : t.data) w.f64(v);
  }
  return w.take();
}

std::vector<NamedTensor> decode_checkpoint(const std::string& bytes) {
  binio::Reader r(bytes, "checkpoint");
  if (bytes.size() < 4 || bytes.compare(0, 4, "NNCK") != 0) throw DataError("bad checkpoint magic");
  r.bytes(4, "magic");
  const auto version = r.u32("version");
  if (version != kCheckpointVersion)
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  const auto count = r.u64("tensor count");
  // smallest tensor record: name_len + rank
  r.require(count, 8, "tensor count");
  std::vector<NamedTensor> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t k = 0; k < count; ++k) {
    NamedTensor t;
    const auto name_len = r.u32("name length");
    t.name = std::string(r.bytes(name_len, "name"));
    const auto rank = r.u32("rank");
    r.require(rank, 8, "rank");
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      const auto d = r.u64("dim");
      t.dims.push_back(d);
      if (d != 0 && n > UINT64_MAX / d) throw DataError("checkpoint: tensor " + t.name + " size overflows");
      n *= d;
    }
    r.require(n, 8, "tensor payload");
    t.data.resize(static_cast<std::size_t>(n));
    for (auto& v : t.data) v = r.f64("payload");
    out.push_back(std::move(t));
  }
  if (r.remaining() != 0) throw DataError("checkpoint: trailing bytes after last tensor");
  return out;
}

void write_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  binio::write_file_bytes(path.string(), encode_checkpoint(tensors));
}

std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(binio::read_file_bytes(path.string()));
}

}  // namespace anxpipe::nn
