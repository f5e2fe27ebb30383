#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace anxpipe::nn {

/// Named tensor as stored in an NNCK file; data is row-major.
struct NamedTensor {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> data;
};

// NNCK layout, all integers little-endian:
//   "NNCK"  u32 version(=1)  u64 count
//   count x { u32 name_len, name bytes (UTF-8), u32 rank, rank x u64 dim, prod(dims) x f64 }

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> decode_checkpoint(const std::string& bytes);

void write_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path);

}  // namespace anxpipe::nn
