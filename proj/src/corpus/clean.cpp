#include <algorithm>
#include <array>
#include <vector>

#include "anxpipe/corpus.hpp"
#include "anxpipe/utf8.hpp"

namespace anxpipe::corpus {

namespace {

struct CodeRange {
  char32_t lo;
  char32_t hi;
};

// Fixed table so the emoji rule does not drift with the host's Unicode data.
constexpr std::array<CodeRange, 6> kEmojiRanges{{
    {0x0FE00, 0x0FE0F},  // Variation Selectors
    {0x1F300, 0x1F5FF},  // Miscellaneous Symbols and Pictographs
    {0x1F600, 0x1F64F},  // Emoticons
    {0x1F680, 0x1F6FF},  // Transport and Map Symbols
    {0x1F900, 0x1F9FF},  // Supplemental Symbols and Pictographs
    {0xE0100, 0xE01EF},  // Variation Selectors Supplement
}};

bool is_space_like(char32_t c) {
  if (utf8::is_ascii_space(c)) return true;
  return c == 0x85 || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_control(char32_t c) { return (c < 0x20 && !utf8::is_ascii_space(c)) || c == 0x7F; }

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_scheme_char(char32_t c) {
  return utf8::is_ascii_alpha(c) || utf8::is_ascii_digit(c) || c == U'+' || c == U'.' || c == U'-';
}

bool is_alnum(char32_t c) { return utf8::is_ascii_digit(c) || utf8::is_letter(c); }

std::u32string strip_tags(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] == U'<') {
      std::size_t j = i + 1;
      bool bang = false;
      if (j < n && (s[j] == U'/' || s[j] == U'!')) {
        bang = s[j] == U'!';
        ++j;
      }
      if (j < n && (utf8::is_ascii_alpha(s[j]) || (bang && s[j] == U'-'))) {
        std::size_t k = j + 1;
        while (k < n && s[k] != U'>' && s[k] != U'<') ++k;
        if (k < n && s[k] == U'>') {
          i = k;
          continue;
        }
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

bool www_at(const std::u32string& s, std::size_t i) {
  if (i + 4 > s.size()) return false;
  for (std::size_t k = 0; k < 3; ++k)
    if (s[i + k] != U'w' && s[i + k] != U'W') return false;
  return s[i + 3] == U'.';
}

std::u32string strip_urls(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  const std::size_t n = s.size();
  // A scheme starts at the first ASCII letter of a run of scheme characters.
  std::vector<bool> scheme_start(n, false);
  bool letter_seen = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (!is_scheme_char(s[k])) {
      letter_seen = false;
      continue;
    }
    if (utf8::is_ascii_alpha(s[k]) && !letter_seen) scheme_start[k] = true;
    letter_seen = letter_seen || utf8::is_ascii_alpha(s[k]);
  }
  std::size_t i = 0;
  while (i < n) {
    bool url = false;
    if (scheme_start[i]) {
      std::size_t j = i;
      while (j < n && is_scheme_char(s[j])) ++j;
      url = j + 3 <= n && s[j] == U':' && s[j + 1] == U'/' && s[j + 2] == U'/';
    }
    if (!url && (i == 0 || !is_alnum(s[i - 1]))) url = www_at(s, i);
    if (url) {
      while (i < n && !is_space_like(s[i])) ++i;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::u32string one_pass(const std::u32string& input) {
  const std::u32string s = strip_urls(strip_tags(input));
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (is_emoji(c) || is_control(c)) continue;
    if (is_space_like(c)) {
      if (out.empty() || out.back() == U' ') continue;
      out.push_back(U' ');
      continue;
    }
    if (is_terminal(c) && !out.empty() && is_terminal(out.back())) continue;
    out.push_back(c);
  }
  while (!out.empty() && out.back() == U' ') out.pop_back();
  return out;
}

}  // namespace

bool is_emoji(char32_t cp) {
  return std::any_of(kEmojiRanges.begin(), kEmojiRanges.end(),
                     [cp](const CodeRange& r) { return cp >= r.lo && cp <= r.hi; });
}

std::string clean_text(std::string_view raw) {
  std::u32string cur = utf8::decode(raw);
  // Every pass only deletes, so this terminates within |raw| iterations.
  while (true) {
    std::u32string next = one_pass(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return utf8::encode(cur);
}

void clean_all(PostCollection& posts) {
  for (auto& p : posts) p.clean_text = clean_text(p.raw_text);
}

}  // namespace anxpipe::corpus
