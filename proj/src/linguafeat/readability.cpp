#include <cmath>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"

namespace anxpipe::feat {

const std::vector<std::string>& readability_names() {
  static const std::vector<std::string> names{
      "ARI",   "ColemanLiau", "DaleChall", "FleshKincaidGradeLevel", "FleshKincaidReadingEase",
      "Fry-x", "Fry-y",       "Lix",       "SMOG",                   "GunningFog",
      "DaleChallPSK", "FORCAST", "Rix",    "Spache"};
  return names;
}

ReadabilityCounts readability_counts(Window window, const ResourceBundle& res) {
  const auto& dale = res.wordlist("dale_chall");
  const auto& spache = res.wordlist("spache");
  ReadabilityCounts c;
  c.sentences = static_cast<double>(window.size());
  for (const auto& s : window) {
    for (const auto& t : s.tokens) {
      if (!t.is_word) continue;
      c.words += 1;
      c.characters += static_cast<double>(t.char_len);
      c.syllables += t.syllables;
      c.polysyllables += t.syllables >= 3;
      c.monosyllables += t.syllables == 1;
      c.long_words += t.char_len > 6;
      c.dale_chall_difficult += dale.count(t.lower) == 0;
      c.spache_unfamiliar += spache.count(t.lower) == 0;
    }
  }
  return c;
}

std::vector<double> readability_from_counts(const ReadabilityCounts& c) {
  if (c.words <= 0) throw DataError("readability needs at least one word");
  if (c.sentences <= 0) throw DataError("readability needs at least one sentence");
  const double W = c.words, S = c.sentences;
  const double asl = W / S;
  const double pdw = 100.0 * c.dale_chall_difficult / W;
  const double dale_chall = 0.1579 * pdw + 0.0496 * asl + (pdw > 5.0 ? 3.6365 : 0.0);
  return {
      4.71 * (c.characters / W) + 0.5 * asl - 21.43,
      0.0588 * (100.0 * c.characters / W) - 0.296 * (100.0 * S / W) - 15.8,
      dale_chall,
      0.39 * asl + 11.8 * (c.syllables / W) - 15.59,
      206.835 - 1.015 * asl - 84.6 * (c.syllables / W),
      100.0 * c.syllables / W,
      100.0 * S / W,
      asl + 100.0 * c.long_words / W,
      1.0430 * std::sqrt(30.0 * c.polysyllables / S) + 3.1291,
      0.4 * (asl + 100.0 * c.polysyllables / W),
      0.0596 * asl + 0.1155 * pdw + 3.2672,
      20.0 - (150.0 * c.monosyllables / W) / 10.0,
      c.long_words / S,
      0.121 * asl + 0.082 * (100.0 * c.spache_unfamiliar / W) + 0.659,
  };
}

std::vector<double> readability_features(Window window, const ResourceBundle& resources) {
  return readability_from_counts(readability_counts(window, resources));
}

}  // namespace anxpipe::feat
