#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace anxpipe::corpus {

/// One labeled social-media document. label 1 = self-reported social
/// anxiety diagnosis.
struct Post {
  std::string id;
  std::string raw_text;
  std::string clean_text;
  std::optional<int> label;
};

using PostCollection = std::vector<Post>;

enum class Format { jsonl, csv };

/// Picks the format from the file extension (.csv -> csv, anything else jsonl).
Format format_from_path(const std::filesystem::path& path);

/// Reads posts in file order. Errors name the offending line number or the
/// duplicated id.
PostCollection load_posts(const std::filesystem::path& path, Format format);

/// Writes JSONL with keys id, text, label (when present). `text` is the
/// cleaned text when `use_clean` is set, the raw text otherwise.
void save_posts_jsonl(const PostCollection& posts, const std::filesystem::path& path, bool use_clean);

/// RFC 4180 record reader. Returns false at end of input. Quoted fields may
/// span lines; `line` receives the physical line the record starts on and
/// `next_line` is advanced past it (start it at 1).
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line,
                     std::size_t& next_line);

/// Parses one label value. Accepts 0, 1, "0", "1", "true", "false" (and JSON
/// booleans in JSONL input).
std::optional<int> parse_label_token(std::string_view token);

/// Applies the preprocessing rules, repeated to a fixed point:
///   1. HTML tags removed. A tag is '<', an optional '/' or '!', an ASCII
///      letter, then any run of characters other than '<' and '>', closed by
///      '>'. Text between tags is kept. A '<' that does not open a tag is
///      kept literally.
///   2. URLs removed up to the next whitespace. A URL starts at a scheme
///      "[A-Za-z][A-Za-z0-9+.-]*://" whose first letter is the first ASCII
///      letter of its run of scheme characters ("2023http://x" keeps
///      "2023"), or at a "www." (case-insensitive) not preceded by a letter
///      or digit.
///   3. Emoji removed per the code-point table in clean.cpp.
///   4. Runs of terminal punctuation [.!?] collapse to their first mark.
///   5. Whitespace runs collapse to one space; result trimmed.
/// Ill-formed UTF-8 bytes are dropped.
std::string clean_text(std::string_view raw);

/// True when the code point falls in the shipped emoji range table.
bool is_emoji(char32_t cp);

void clean_all(PostCollection& posts);

struct SplitSpec {
  double train_frac = 0.75;
  double val_frac = 0.084;
  double test_frac = 0.166;
  std::uint64_t seed = 42;

  /// Throws DataError unless fractions are positive and sum to 1 within 1e-9.
  void validate() const;
};

struct Splits {
  PostCollection train;
  PostCollection validation;
  PostCollection test;
};

/// Stratified, seeded three-way split. Sizes: validation = round(val_frac*n),
/// test = round(test_frac*n), train takes the remainder. Within each split
/// the input order is preserved. Assignment depends on ids and the seed,
/// not on input order.
Splits split_dataset(const PostCollection& posts, const SplitSpec& spec);

}  // namespace anxpipe::corpus
