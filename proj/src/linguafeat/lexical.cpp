#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"

namespace anxpipe::feat {

namespace {

bool content_word(PosClass p) {
  return p == PosClass::noun || p == PosClass::verb || p == PosClass::adj || p == PosClass::adv;
}

std::vector<const Token*> words_in(Window window) {
  std::vector<const Token*> out;
  for (const auto& s : window)
    for (const auto& t : s.tokens)
      if (t.is_word) out.push_back(&t);
  return out;
}

}  // namespace

const std::vector<std::string>& lexical_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v{"MLWc", "MLWs", "LD",   "NDW",  "CNDW", "TTR",  "cTTR",
                               "rTTR", "AFL",  "ANC",  "BNC",  "NAWL", "NGSL", "NonStopWordsRate",
                               "WordPrevalence"};
    for (int k = 1; k <= kPrevalenceCategories; ++k) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "Prevalence.%02d", k);
      v.emplace_back(buf);
    }
    v.emplace_back("AoA-mean");
    v.emplace_back("AoA-max");
    return v;
  }();
  return names;
}

std::vector<double> lexical_richness_features(Window window, const ResourceBundle& res) {
  const auto words = words_in(window);
  if (words.empty()) throw DataError("window has no word tokens");
  const double n = static_cast<double>(words.size());

  double chars = 0, syll = 0, content = 0;
  std::unordered_set<std::string> types;
  for (const Token* t : words) {
    chars += static_cast<double>(t->char_len);
    syll += t->syllables;
    content += content_word(t->pos);
    types.insert(t->lower);
  }
  const double ndw = static_cast<double>(types.size());

  auto share_in = [&](const std::string& list) {
    const auto& set = res.wordlist(list);
    double hits = 0;
    for (const Token* t : words) hits += set.count(t->lower) > 0;
    return hits / n;
  };

  // academic formulas: contiguous token n-grams (n <= 5) listed in the AFL
  double afl_hits = 0;
  if (const auto& afl = res.wordlist("afl"); !afl.empty()) {
    for (const auto& s : window) {
      const auto& tk = s.tokens;
      for (std::size_t i = 0; i < tk.size(); ++i) {
        std::string gram;
        for (std::size_t len = 1; len <= kMaxNgram && i + len <= tk.size(); ++len) {
          if (len > 1) gram.push_back(' ');
          gram += tk[i + len - 1].lower;
          afl_hits += afl.count(gram) > 0;
        }
      }
    }
  }

  auto scalar_mean = [&](const std::string& name, double* max_out) {
    const auto* lex = res.scalar(name);
    double sum = 0, count = 0, mx = 0;
    if (lex) {
      for (const Token* t : words) {
        const auto it = lex->find(t->lower);
        if (it == lex->end()) continue;
        sum += it->second;
        mx = count == 0 ? it->second : std::max(mx, it->second);
        ++count;
      }
    }
    if (max_out) *max_out = mx;
    return count == 0 ? 0.0 : sum / count;
  };

  std::vector<double> out;
  out.reserve(lexical_names().size());
  out.push_back(chars / n);
  out.push_back(syll / n);
  out.push_back(content / n);
  out.push_back(ndw);
  out.push_back(ndw / std::sqrt(2.0 * n));
  out.push_back(ndw / n);
  out.push_back(ndw / std::sqrt(2.0 * n));
  out.push_back(ndw / std::sqrt(n));
  out.push_back(afl_hits / n);
  out.push_back(1.0 - share_in("anc"));
  out.push_back(1.0 - share_in("bnc"));
  out.push_back(share_in("nawl"));
  out.push_back(1.0 - share_in("ngsl"));
  out.push_back(1.0 - share_in("stopwords"));
  out.push_back(scalar_mean("prevalence", nullptr));

  const auto& cats = res.prevalence_categories;
  std::vector<double> cat_sum(kPrevalenceCategories, 0.0);
  double cat_matched = 0;
  for (const Token* t : words) {
    const auto* scores = cats.find(t->lower);
    if (!scores) continue;
    ++cat_matched;
    for (std::size_t k = 0; k < scores->size() && k < cat_sum.size(); ++k) cat_sum[k] += (*scores)[k];
  }
  for (double s : cat_sum) out.push_back(cat_matched == 0 ? 0.0 : s / cat_matched);

  double aoa_max = 0;
  const double aoa_mean = scalar_mean("aoa", &aoa_max);
  out.push_back(aoa_mean);
  out.push_back(aoa_max);
  return out;
}

}  // namespace anxpipe::feat
