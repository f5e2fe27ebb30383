#include "anxpipe/linguafeat/families.hpp"

namespace anxpipe::feat {

std::vector<std::string> lexicon_names(const ResourceBundle& res) {
  std::vector<std::string> out;
  for (const auto& [name, lex] : res.affect_lexicons)
    for (const auto& cat : lex.categories) out.push_back(name + "." + cat);
  return out;
}

std::vector<double> lexicon_features(Window window, const ResourceBundle& res) {
  std::vector<double> out;
  for (const auto& [name, lex] : res.affect_lexicons) {
    std::vector<double> sum(lex.categories.size(), 0.0);
    double matched = 0;
    for (const auto& s : window) {
      for (const auto& t : s.tokens) {
        if (!t.is_word) continue;
        const auto* scores = lex.find(t.lower);
        if (!scores) continue;
        ++matched;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*scores)[k];
      }
    }
    for (double v : sum) out.push_back(matched == 0 ? 0.0 : v / matched);
  }
  return out;
}

}  // namespace anxpipe::feat
