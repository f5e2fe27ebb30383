#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace anxpipe::feat {

inline constexpr std::array<const char*, 5> kGenres{"spoken", "fiction", "magazine", "news", "academic"};
inline constexpr int kMaxNgram = 5;
inline constexpr int kPrevalenceCategories = 35;

/// Word -> per-category scores. Categories keep the order of first
/// appearance in the source file; a word without a category scores 0 there.
struct AffectLexicon {
  std::vector<std::string> categories;
  std::unordered_map<std::string, std::vector<double>> entries;

  const std::vector<double>* find(const std::string& lower) const;
};

/// Log frequencies of one genre, indexed by n-1.
struct NgramTable {
  std::array<std::unordered_map<std::string, double>, kMaxNgram> by_order;
};

/// Lexical resources. All keys are stored ASCII-lowercased; lookups take
/// the token's lower form. Immutable once loaded and safe to share.
struct ResourceBundle {
  std::map<std::string, std::unordered_set<std::string>> wordlists;
  std::map<std::string, std::unordered_map<std::string, double>> scalar_lexicons;
  std::map<std::string, AffectLexicon> affect_lexicons;
  AffectLexicon prevalence_categories;
  std::map<std::string, NgramTable> ngram_tables;  // genre -> table
  double ngram_floor = 0.0;

  /// Empty set when the list is not loaded.
  const std::unordered_set<std::string>& wordlist(const std::string& name) const;
  /// nullptr when the lexicon is not loaded.
  const std::unordered_map<std::string, double>* scalar(const std::string& name) const;
  /// Throws DataError naming the genre when absent.
  const NgramTable& ngram_table(const std::string& genre) const;

  /// Directory layout:
  ///   wordlists/<name>.txt          one word (or space-joined phrase) per line
  ///   scalar/<name>.tsv             word<TAB>value
  ///   affect/<name>.tsv             word<TAB>cat1=v1,cat2=v2,...
  ///   prevalence_categories.tsv     affect format, at most 35 categories
  ///   ngrams/*.tsv                  n<TAB>genre<TAB>ngram<TAB>logfreq
  /// Blank lines and lines starting with '#' are ignored. Missing
  /// subdirectories are treated as empty.
  static ResourceBundle load_directory(const std::filesystem::path& dir);
};

std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path);
std::unordered_map<std::string, double> load_scalar_lexicon(const std::filesystem::path& path);
AffectLexicon load_affect_lexicon(const std::filesystem::path& path);
/// Adds the rows of one n-gram TSV to `tables`.
void load_ngram_file(const std::filesystem::path& path, std::map<std::string, NgramTable>& tables);

}  // namespace anxpipe::feat
