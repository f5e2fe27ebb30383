#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace anxpipe::feat {

enum class PosClass { noun, verb, adj, adv, function, other };

std::string_view to_string(PosClass pos);

struct Token {
  std::string surface;
  std::string lower;       // ASCII-lowercased surface
  std::size_t char_len = 0;  // code points in surface
  int syllables = 0;       // >= 1 for words, 0 otherwise
  PosClass pos = PosClass::other;
  bool is_word = false;    // contains at least one letter
};

struct Sentence {
  std::string text;
  std::vector<Token> tokens;
};

/// Splits cleaned text into alphanumeric tokens. Apostrophes (' and U+2019)
/// and hyphens between two word characters stay inside the token, so
/// contractions and hyphenated compounds are single tokens. Punctuation and
/// symbols separate tokens and are not emitted.
std::vector<Token> tokenize(std::string_view text);

/// Sentence boundaries sit after a run of [.!?] (plus closing quotes and
/// brackets) that is followed by end of text, or by whitespace and then an
/// ASCII capital or a digit. A period ending one of the abbreviations
/// e.g. i.e. Mr. Mrs. Ms. Dr. vs. etc. never ends a sentence. Spans with
/// no tokens are merged into the preceding sentence.
///
/// Throws DataError("no sentences") when the text holds no token at all.
std::vector<Sentence> segment_sentences(std::string_view text);

/// Vowel-group count over ASCII letters (y counts as a vowel), minus one
/// for a silent final 'e' unless the word ends in consonant+"le"; minimum 1.
int count_syllables(std::string_view word);

/// Built-in part-of-speech lookup: closed-class and common open-class word
/// lists first, then suffix rules, then noun as the default for words.
PosClass lookup_pos(std::string_view lower_word);

}  // namespace anxpipe::feat
