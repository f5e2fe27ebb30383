#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anxpipe/linguafeat/resources.hpp"
#include "anxpipe/linguafeat/syntax.hpp"
#include "anxpipe/linguafeat/text.hpp"

namespace anxpipe::feat {

using Window = std::span<const Sentence>;

// ---- morpho-syntactic --------------------------------------------------

inline constexpr std::size_t kMorphoRatioCount = 16;
inline constexpr std::size_t kMorphoCount = 19;

/// MLC MLS MLT C/S C/T DepC/C T/S CompT/T DepC/T CoordP/C CoordP/T
/// NP.PostMod NP.PreMod CompN/C CompN/T VP/T BaseKolDef MorKolDef SynKolDef
const std::vector<std::string>& morphosyntactic_names();

/// The 16 ratio features: window-aggregate count quotients, 0 when the
/// denominator is 0. NP.PostMod / NP.PreMod divide by the noun-phrase count.
std::vector<double> morphosyntactic_ratios(Window window, std::span<const SyntaxAnnotation> annotations);

/// Ratios followed by the three compression features of the window text.
std::vector<double> morphosyntactic_features(Window window, std::span<const SyntaxAnnotation> annotations,
                                             std::uint64_t seed);

enum class KolmogorovMode { base, morphological, syntactic };

/// base: zlib-compressed size / byte size.
/// morphological: base ratio of a copy in which every code point of every
///   whitespace-separated word is deleted with probability 0.1, divided by
///   the base ratio of the original.
/// syntactic: the same with whole words deleted with probability 0.1.
/// The ratio of an empty distorted copy is 0. Throws on empty input.
double kolmogorov_complexity(std::string_view text, KolmogorovMode mode, std::uint64_t seed);

/// Window text: sentence texts joined by single spaces.
std::string window_text(Window window);

// ---- lexical richness --------------------------------------------------

/// 52 features: MLWc MLWs LD NDW CNDW TTR cTTR rTTR AFL ANC BNC NAWL NGSL
/// NonStopWordsRate WordPrevalence Prevalence.01..35 AoA-mean AoA-max.
const std::vector<std::string>& lexical_names();

/// Wordlist rates use the window word count as denominator; ANC, BNC and
/// NGSL are inverted (share of words outside the list). AFL counts formula
/// matches (n = 1..5, within sentences) per word. Scalar and category
/// lexicon means use matched words only; the mean (and max) of nothing is 0.
/// Throws DataError when the window has no word token.
std::vector<double> lexical_richness_features(Window window, const ResourceBundle& resources);

// ---- readability -------------------------------------------------------

/// Raw counts feeding every readability formula.
struct ReadabilityCounts {
  double words = 0;
  double sentences = 0;
  double characters = 0;     // code points in word tokens
  double syllables = 0;
  double polysyllables = 0;  // words with >= 3 syllables
  double monosyllables = 0;  // words with exactly 1 syllable
  double long_words = 0;     // words with > 6 characters
  double dale_chall_difficult = 0;  // words outside wordlists/dale_chall
  double spache_unfamiliar = 0;     // words outside wordlists/spache
};

const std::vector<std::string>& readability_names();

ReadabilityCounts readability_counts(Window window, const ResourceBundle& resources);

/// The 14 indices from raw counts. W = words, S = sentences, C = characters,
/// Y = syllables, P = polysyllables, M = monosyllables, L = long words,
/// D = Dale-Chall difficult, U = Spache unfamiliar:
///   ARI            4.71 C/W + 0.5 W/S - 21.43
///   ColemanLiau    0.0588 (100 C/W) - 0.296 (100 S/W) - 15.8
///   DaleChall      0.1579 (100 D/W) + 0.0496 W/S, + 3.6365 when 100 D/W > 5
///   FK grade       0.39 W/S + 11.8 Y/W - 15.59
///   FK ease        206.835 - 1.015 W/S - 84.6 Y/W
///   Fry-x          100 Y/W          (syllables per 100 words)
///   Fry-y          100 S/W          (sentences per 100 words)
///   Lix            W/S + 100 L/W
///   SMOG           1.0430 sqrt(30 P/S) + 3.1291
///   GunningFog     0.4 (W/S + 100 P/W)
///   DaleChallPSK   0.0596 W/S + 0.1155 (100 D/W) + 3.2672
///   FORCAST        20 - (150 M/W) / 10
///   Rix            L/S
///   Spache         0.121 W/S + 0.082 (100 U/W) + 0.659
/// Throws DataError when W = 0 or S = 0.
std::vector<double> readability_from_counts(const ReadabilityCounts& c);

std::vector<double> readability_features(Window window, const ResourceBundle& resources);

// ---- register n-grams --------------------------------------------------

/// "<genre>.<n>" for the five genres, n = 1..5, genre-major. The registry
/// prefixes family names ("ngram.", "lex.", ...) to form feature ids.
const std::vector<std::string>& ngram_names();

/// Mean log frequency over the window's n-grams (lowercased tokens, not
/// crossing sentence boundaries); n-grams missing from the table count as
/// the bundle's floor value, and an empty n-gram set yields the floor.
std::vector<double> ngram_register_features(Window window, const ResourceBundle& resources);

// ---- affect lexicons ---------------------------------------------------

/// "<name>.<category>" in lexicon-name order, categories in file order.
std::vector<std::string> lexicon_names(const ResourceBundle& resources);

/// Per lexicon category: mean score over the window's words found in that
/// lexicon (0 when none is found).
std::vector<double> lexicon_features(Window window, const ResourceBundle& resources);

}  // namespace anxpipe::feat
