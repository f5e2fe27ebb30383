#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"
#include "anxpipe/rng.hpp"

using namespace anxpipe;
using namespace anxpipe::feat;

namespace {

struct Parsed {
  std::vector<Sentence> sentences;
  std::vector<SyntaxAnnotation> annotations;
  Window window() const { return sentences; }
};

Parsed parse(const std::string& text) {
  Parsed p;
  p.sentences = segment_sentences(text);
  for (const auto& s : p.sentences) p.annotations.push_back(annotate_syntax(s));
  return p;
}

double named(const std::vector<double>& values, const std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  REQUIRE_MESSAGE(it != names.end(), name);
  return values[static_cast<std::size_t>(it - names.begin())];
}

ResourceBundle constant_ngram_bundle(double value) {
  ResourceBundle res;
  for (const char* genre : kGenres) {
    auto& table = res.ngram_tables[genre];
    for (const char* w : {"the", "cat", "sat", "on", "mat"}) table.by_order[0][w] = value;
  }
  return res;
}

}  // namespace

// ---- morpho-syntactic ----------------------------------------------------

TEST_CASE("morphosyntactic ratios on a one-clause window") {
  const auto p = parse("I ran.");
  const auto v = morphosyntactic_ratios(p.window(), p.annotations);
  const auto& names = morphosyntactic_names();
  REQUIRE(v.size() == kMorphoRatioCount);
  CHECK(named(v, names, "MLC") == 2.0);
  CHECK(named(v, names, "MLS") == 2.0);
  CHECK(named(v, names, "C/S") == 1.0);
  CHECK(named(v, names, "DepC/C") == 0.0);
  CHECK(named(v, names, "T/S") == 1.0);
}

TEST_CASE("verbless window zeroes clause-denominator ratios") {
  const auto p = parse("Yes.");
  const auto v = morphosyntactic_ratios(p.window(), p.annotations);
  const auto& names = morphosyntactic_names();
  CHECK(named(v, names, "MLS") == 1.0);
  for (const char* n : {"MLC", "DepC/C", "CoordP/C", "CompN/C"}) CHECK(named(v, names, n) == 0.0);
}

TEST_CASE("ratio features are invariant under window duplication") {
  for (const char* text : {"I left because I was tired.", "The old man who lives here sold his red car and left.",
                           "Yes.", "I ran and she walked. Did you see the big dog in the park?"}) {
    const auto once = parse(text);
    const auto twice = parse(std::string(text) + " " + text);
    REQUIRE(twice.sentences.size() == 2 * once.sentences.size());
    const auto a = morphosyntactic_ratios(once.window(), once.annotations);
    const auto b = morphosyntactic_ratios(twice.window(), twice.annotations);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("morphosyntactic features check their inputs") {
  const auto p = parse("I ran. She sat.");
  CHECK_THROWS_AS(morphosyntactic_features(p.window(), std::span(p.annotations).first(1), 42), DataError);
  CHECK(morphosyntactic_features(p.window(), p.annotations, 42).size() == kMorphoCount);
  CHECK(morphosyntactic_names().size() == kMorphoCount);
}

// ---- Kolmogorov --------------------------------------------------------

TEST_CASE("compression ratio of repetitive text is small") {
  const std::string a(100, 'a');
  CHECK(kolmogorov_complexity(a, KolmogorovMode::base, 42) < 0.3);
}

TEST_CASE("compression ratio of random bytes is near one") {
  Rng rng(7);
  std::string noise(4096, '\0');
  for (auto& c : noise) c = static_cast<char>(rng.below(256));
  CHECK(kolmogorov_complexity(noise, KolmogorovMode::base, 42) >= 0.9);
}

TEST_CASE("distorted compression is seeded") {
  const std::string text = "The quick brown fox jumps over the lazy dog while the cat sleeps on the warm mat.";
  for (auto mode : {KolmogorovMode::morphological, KolmogorovMode::syntactic}) {
    const double a = kolmogorov_complexity(text, mode, 42);
    CHECK(a == kolmogorov_complexity(text, mode, 42));
    CHECK(std::isfinite(a));
    CHECK(a > 0.0);
  }
  CHECK_THROWS_AS(kolmogorov_complexity("", KolmogorovMode::base, 42), DataError);
}

// ---- lexical richness ----------------------------------------------------

TEST_CASE("type-token ratios") {
  ResourceBundle res;
  const auto& names = lexical_names();
  SUBCASE("all distinct") {
    const auto v = lexical_richness_features(parse("a b c d.").window(), res);
    CHECK(named(v, names, "TTR") == 1.0);
    CHECK(named(v, names, "rTTR") == 2.0);
    CHECK(named(v, names, "NDW") == 4.0);
  }
  SUBCASE("single type") {
    const auto v = lexical_richness_features(parse("a a a a.").window(), res);
    CHECK(named(v, names, "TTR") == 0.25);
    CHECK(named(v, names, "NDW") == 1.0);
    CHECK(named(v, names, "rTTR") == 0.5);
    CHECK(named(v, names, "CNDW") == doctest::Approx(1.0 / std::sqrt(8.0)));
  }
}

TEST_CASE("type-token identities hold on arbitrary windows") {
  ResourceBundle res;
  const auto& names = lexical_names();
  for (const char* text : {"I left because I was tired.", "the the cat sat on the mat and the dog sat too.",
                           "Well-known facts aren't always true. Really!"}) {
    const auto v = lexical_richness_features(parse(text).window(), res);
    const double ttr = named(v, names, "TTR"), rttr = named(v, names, "rTTR"), cttr = named(v, names, "cTTR");
    const double ndw = named(v, names, "NDW");
    const double tokens = ndw / ttr;
    CHECK(ttr > 0.0);
    CHECK(ttr <= 1.0);
    CHECK(rttr == doctest::Approx(ttr * std::sqrt(tokens)).epsilon(1e-12));
    CHECK(cttr == doctest::Approx(rttr / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("scalar lexicon means skip unknown words") {
  ResourceBundle res;
  res.scalar_lexicons["aoa"] = {{"cat", 3.0}, {"dog", 5.0}};
  const auto v = lexical_richness_features(parse("cat dog zebra.").window(), res);
  CHECK(named(v, lexical_names(), "AoA-mean") == 4.0);
  CHECK(named(v, lexical_names(), "AoA-max") == 5.0);
  const auto none = lexical_richness_features(parse("zebra.").window(), res);
  CHECK(named(none, lexical_names(), "AoA-mean") == 0.0);
}

TEST_CASE("wordlist rates") {
  ResourceBundle res;
  res.wordlists["stopwords"] = {"the", "on"};
  res.wordlists["ngsl"] = {"the", "cat", "on"};
  res.wordlists["afl"] = {"on the mat"};
  const auto v = lexical_richness_features(parse("The cat sat on the mat.").window(), res);
  const auto& names = lexical_names();
  CHECK(named(v, names, "NonStopWordsRate") == doctest::Approx(3.0 / 6.0));
  CHECK(named(v, names, "NGSL") == doctest::Approx(2.0 / 6.0));
  CHECK(named(v, names, "AFL") == doctest::Approx(1.0 / 6.0));
  // lists that are absent count nothing as covered
  CHECK(named(v, names, "NAWL") == 0.0);
}

TEST_CASE("lexical features need a word") {
  ResourceBundle res;
  CHECK_THROWS_AS(lexical_richness_features(parse("2023 42.").window(), res), DataError);
  CHECK(lexical_names().size() == 52);
}

// ---- readability ---------------------------------------------------------

TEST_CASE("readability formulas from counts") {
  const auto& names = readability_names();
  ReadabilityCounts c;
  c.words = 100;
  c.sentences = 5;
  c.characters = 400;
  c.syllables = 130;
  const auto v = readability_from_counts(c);
  CHECK(named(v, names, "ARI") == doctest::Approx(7.41).epsilon(1e-12));
  CHECK(named(v, names, "FleshKincaidReadingEase") == doctest::Approx(76.555).epsilon(1e-12));
  CHECK(named(v, names, "Fry-x") == doctest::Approx(130.0));
  CHECK(named(v, names, "Fry-y") == doctest::Approx(5.0));
}

TEST_CASE("one-word window is finite") {
  ResourceBundle res;
  const auto v = readability_features(parse("Hi.").window(), res);
  REQUIRE(v.size() == 14);
  for (double x : v) CHECK(std::isfinite(x));
  CHECK_THROWS_AS(readability_from_counts(ReadabilityCounts{}), DataError);
}

TEST_CASE("readability counts") {
  ResourceBundle res;
  res.wordlists["dale_chall"] = {"the", "cat"};
  const auto c = readability_counts(parse("The cat ate beautiful sandwiches. Extraordinary!").window(), res);
  CHECK(c.words == 6);
  CHECK(c.sentences == 2);
  CHECK(c.characters == 3 + 3 + 3 + 9 + 10 + 13);
  CHECK(c.long_words == 3);
  CHECK(c.dale_chall_difficult == 4);
  CHECK(c.spache_unfamiliar == 6);
}

// ---- register n-grams ------------------------------------------------------

TEST_CASE("n-gram register features") {
  const auto& names = ngram_names();
  REQUIRE(names.size() == 25);
  CHECK(names[0] == "spoken.1");
  CHECK(names[5] == "fiction.1");

  SUBCASE("constant table") {
    const auto v = ngram_register_features(parse("The cat sat on the mat.").window(), constant_ngram_bundle(2.0));
    CHECK(named(v, names, "spoken.1") == 2.0);
  }
  SUBCASE("too-short window yields the floor") {
    auto res = constant_ngram_bundle(2.0);
    res.ngram_floor = -1.5;
    const auto v = ngram_register_features(parse("the cat").window(), res);
    CHECK(named(v, names, "spoken.5") == -1.5);
    CHECK(named(v, names, "news.3") == -1.5);
  }
  SUBCASE("mixed table mean") {
    auto res = constant_ngram_bundle(0.0);
    res.ngram_tables["spoken"].by_order[0] = {{"the", 3.0}, {"cat", 1.0}};
    const auto v = ngram_register_features(parse("the cat").window(), res);
    CHECK(named(v, names, "spoken.1") == 2.0);
  }
  SUBCASE("n-grams do not cross sentences") {
    auto res = constant_ngram_bundle(0.0);
    res.ngram_tables["spoken"].by_order[1] = {{"cat sat", 4.0}, {"the cat", 2.0}};
    const auto joined = ngram_register_features(parse("the cat sat").window(), res);
    const auto split = ngram_register_features(parse("The cat. Sat on.").window(), res);
    CHECK(named(joined, names, "spoken.2") == 3.0);
    // "the cat" and "sat on": the second is out of table and contributes the floor
    CHECK(named(split, names, "spoken.2") == 1.0);
  }
  SUBCASE("missing genre") {
    auto res = constant_ngram_bundle(1.0);
    res.ngram_tables.erase("magazine");
    try {
      (void)ngram_register_features(parse("the cat").window(), res);
      FAIL("expected error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("magazine") != std::string::npos);
    }
  }
}

// ---- affect lexicons -------------------------------------------------------

TEST_CASE("affect lexicon means use matched words only") {
  ResourceBundle res;
  res.affect_lexicons["nrc"] = AffectLexicon{{"fear"}, {{"fear", {1.0}}}};
  res.affect_lexicons["vad"] = AffectLexicon{{"valence"}, {{"good", {1.0}}, {"bad", {-1.0}}}};
  const auto names = lexicon_names(res);
  REQUIRE(names == std::vector<std::string>{"nrc.fear", "vad.valence"});

  const auto a = lexicon_features(parse("fear fear calm").window(), res);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);
  const auto b = lexicon_features(parse("good bad").window(), res);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);
  const auto c = lexicon_features(parse("Good good bad!").window(), res);
  CHECK(c[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("window text joins sentences") {
  const auto p = parse("I ran.  She sat!");
  CHECK(window_text(p.window()) == "I ran. She sat!");
}
