#include <zlib.h>

#include <vector>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"
#include "anxpipe/rng.hpp"
#include "anxpipe/utf8.hpp"

namespace anxpipe::feat {

namespace {

constexpr double kDistortionRate = 0.1;

double compression_ratio(std::string_view bytes) {
  if (bytes.empty()) return 0.0;
  uLongf out_len = compressBound(static_cast<uLong>(bytes.size()));
  std::vector<Bytef> out(out_len);
  const int rc = compress2(out.data(), &out_len, reinterpret_cast<const Bytef*>(bytes.data()),
                           static_cast<uLong>(bytes.size()), Z_BEST_COMPRESSION);
  if (rc != Z_OK) throw DataError("zlib compression failed");
  return static_cast<double>(out_len) / static_cast<double>(bytes.size());
}

std::vector<std::string_view> words_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && utf8::is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !utf8::is_ascii_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string distort(std::string_view text, KolmogorovMode mode, std::uint64_t seed) {
  Rng rng(seed);
  std::string out;
  for (auto word : words_of(text)) {
    std::string kept;
    if (mode == KolmogorovMode::syntactic) {
      if (rng.bernoulli(kDistortionRate)) continue;
      kept = std::string(word);
    } else {
      for (char32_t c : utf8::decode(word))
        if (!rng.bernoulli(kDistortionRate)) utf8::append(kept, c);
    }
    if (kept.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += kept;
  }
  return out;
}

}  // namespace

double kolmogorov_complexity(std::string_view text, KolmogorovMode mode, std::uint64_t seed) {
  if (text.empty()) throw DataError("kolmogorov complexity of empty text");
  const double base = compression_ratio(text);
  if (mode == KolmogorovMode::base) return base;
  return compression_ratio(distort(text, mode, seed)) / base;
}

}  // namespace anxpipe::feat
