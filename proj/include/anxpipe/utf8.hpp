#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace anxpipe::utf8 {

/// Decode UTF-8 into code points. Ill-formed sequences (overlong forms,
/// surrogates, truncated tails, stray continuation bytes) are skipped one
/// byte at a time.
std::u32string decode(std::string_view bytes);

void append(std::string& out, char32_t cp);

std::string encode(std::u32string_view cps);

inline bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
}

inline bool is_ascii_alpha(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }
inline bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
inline bool is_ascii_upper(char32_t c) { return c >= U'A' && c <= U'Z'; }

/// Coarse letter test: ASCII letters plus every code point >= U+00C0 outside
/// the punctuation, symbol, space and control blocks listed in utf8.cpp.
bool is_letter(char32_t c);

/// ASCII-only lowercase; non-ASCII code points pass through.
std::string ascii_lower(std::string_view s);

}  // namespace anxpipe::utf8
