#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "anxpipe/error.hpp"

namespace anxpipe::binio {

/// Appends little-endian values to a byte string.
class Writer {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string out_;
};

/// Bounds-checked little-endian reader. Every read past the end throws
/// DataError("<what>: truncated ...").
class Reader {
 public:
  Reader(std::string_view data, std::string what) : data_(data), what_(std::move(what)) {}

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

  /// Throws unless `count` items of `size` bytes are still available;
  /// call before allocating for a declared length.
  void require(std::uint64_t count, std::uint64_t size, const char* field) const {
    if (size != 0 && count > remaining() / size)
      throw DataError(what_ + ": truncated file (" + field + " declares more data than remains)");
  }

  std::string_view bytes(std::size_t n, const char* field) {
    require(n, 1, field);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(get(4, field)); }
  std::uint64_t u64(const char* field) { return get(8, field); }
  double f64(const char* field) { return std::bit_cast<double>(get(8, field)); }
  float f32(const char* field) { return std::bit_cast<float>(static_cast<std::uint32_t>(get(4, field))); }

 private:
  std::uint64_t get(int n, const char* field) {
    require(1, static_cast<std::uint64_t>(n), field);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::string_view data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::string& bytes);

}  // namespace anxpipe::binio
