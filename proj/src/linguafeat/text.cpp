#include "anxpipe/linguafeat/text.hpp"

#include <algorithm>
#include <array>

#include "anxpipe/error.hpp"
#include "anxpipe/utf8.hpp"

namespace anxpipe::feat {

namespace {

bool is_word_char(char32_t c) { return utf8::is_letter(c) || utf8::is_ascii_digit(c); }

bool is_joiner(char32_t c) { return c == U'\'' || c == 0x2019 || c == U'-'; }

bool is_closer(char32_t c) {
  return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x2019 || c == 0x201D;
}

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

constexpr std::array<std::string_view, 8> kAbbreviations{"e.g.", "i.e.", "mr.", "mrs.", "ms.", "dr.", "vs.", "etc."};

bool ends_with_abbreviation(const std::u32string& s, std::size_t period) {
  std::size_t start = period;
  while (start > 0 && (utf8::is_ascii_alpha(s[start - 1]) || s[start - 1] == U'.')) --start;
  std::string word;
  for (std::size_t k = start; k <= period; ++k) word.push_back(static_cast<char>(s[k]));
  word = utf8::ascii_lower(word);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

Token make_token(const std::u32string& cps) {
  Token t;
  t.surface = utf8::encode(cps);
  t.lower = utf8::ascii_lower(t.surface);
  t.char_len = cps.size();
  t.is_word = std::any_of(cps.begin(), cps.end(), [](char32_t c) { return utf8::is_letter(c); });
  if (t.is_word) {
    t.syllables = count_syllables(t.lower);
    t.pos = lookup_pos(t.lower);
  }
  return t;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(' ');
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(' ');
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view to_string(PosClass pos) {
  switch (pos) {
    case PosClass::noun: return "noun";
    case PosClass::verb: return "verb";
    case PosClass::adj: return "adj";
    case PosClass::adv: return "adv";
    case PosClass::function: return "function";
    case PosClass::other: return "other";
  }
  return "other";
}

std::vector<Token> tokenize(std::string_view text) {
  const std::u32string s = utf8::decode(text);
  std::vector<Token> out;
  std::u32string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (is_word_char(c)) {
      cur.push_back(c);
    } else if (is_joiner(c) && !cur.empty() && i + 1 < s.size() && is_word_char(s[i + 1])) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(make_token(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(make_token(cur));
  return out;
}

std::vector<Sentence> segment_sentences(std::string_view text) {
  const std::u32string s = utf8::decode(text);
  const std::size_t n = s.size();
  std::vector<std::string> spans;
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_terminal(s[i])) continue;
    std::size_t j = i;
    while (j + 1 < n && (is_terminal(s[j + 1]) || is_closer(s[j + 1]))) ++j;
    bool boundary = false;
    if (j + 1 >= n) {
      boundary = true;
    } else if (utf8::is_ascii_space(s[j + 1])) {
      std::size_t k = j + 1;
      while (k < n && utf8::is_ascii_space(s[k])) ++k;
      boundary = k >= n || utf8::is_ascii_upper(s[k]) || utf8::is_ascii_digit(s[k]);
    }
    if (boundary && s[i] == U'.' && j == i && ends_with_abbreviation(s, i)) boundary = false;
    if (boundary) {
      spans.push_back(utf8::encode(std::u32string_view(s).substr(start, j + 1 - start)));
      start = j + 1;
    }
    i = j;
  }
  if (start < n) spans.push_back(utf8::encode(std::u32string_view(s).substr(start)));

  std::vector<Sentence> out;
  std::string carry;
  for (const auto& raw : spans) {
    std::string piece = trim(raw);
    if (piece.empty()) continue;
    auto tokens = tokenize(piece);
    if (tokens.empty()) {
      if (!out.empty()) {
        out.back().text += " " + piece;
      } else {
        carry += (carry.empty() ? "" : " ") + piece;
      }
      continue;
    }
    if (!carry.empty()) {
      piece = carry + " " + piece;
      carry.clear();
    }
    out.push_back({std::move(piece), std::move(tokens)});
  }
  if (out.empty()) throw DataError("no sentences");
  return out;
}

int count_syllables(std::string_view word) {
  std::string letters;
  for (char c : word) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c >= 'a' && c <= 'z') letters.push_back(c);
  }
  auto vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; };
  int groups = 0;
  bool prev = false;
  for (char c : letters) {
    const bool v = vowel(c);
    if (v && !prev) ++groups;
    prev = v;
  }
  const std::size_t len = letters.size();
  if (groups > 1 && len >= 2 && letters[len - 1] == 'e') {
    const bool consonant_le = len >= 3 && letters[len - 2] == 'l' && !vowel(letters[len - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

}  // namespace anxpipe::feat
