#include "anxpipe/linguafeat/families.hpp"

namespace anxpipe::feat {

const std::vector<std::string>& ngram_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const char* g : kGenres)
      for (int n = 1; n <= kMaxNgram; ++n) v.push_back(std::string(g) + "." + std::to_string(n));
    return v;
  }();
  return names;
}

std::vector<double> ngram_register_features(Window window, const ResourceBundle& res) {
  std::vector<double> out;
  out.reserve(kGenres.size() * kMaxNgram);
  for (const char* genre : kGenres) {
    const NgramTable& table = res.ngram_table(genre);
    for (int n = 1; n <= kMaxNgram; ++n) {
      const auto& freq = table.by_order[static_cast<std::size_t>(n - 1)];
      double sum = 0, count = 0;
      for (const auto& s : window) {
        const auto& tk = s.tokens;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tk.size(); ++i) {
          std::string gram = tk[i].lower;
          for (int k = 1; k < n; ++k) gram += " " + tk[i + static_cast<std::size_t>(k)].lower;
          const auto it = freq.find(gram);
          sum += it == freq.end() ? res.ngram_floor : it->second;
          ++count;
        }
      }
      out.push_back(count == 0 ? res.ngram_floor : sum / count);
    }
  }
  return out;
}

}  // namespace anxpipe::feat
