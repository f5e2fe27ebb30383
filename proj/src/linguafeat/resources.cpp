#include "anxpipe/linguafeat/resources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "anxpipe/error.hpp"
#include "anxpipe/utf8.hpp"

namespace anxpipe::feat {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

double parse_real(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw DataError(where(path, line) + "bad number \"" + std::string(s) + "\"");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (true) {
    const auto j = s.find(sep, i);
    out.push_back(s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

template <class F>
void for_each_line(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    f(std::string_view(line), no);
  }
}

std::vector<std::filesystem::path> files_in(const std::filesystem::path& dir, std::string_view ext) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const std::vector<double>* AffectLexicon::find(const std::string& lower) const {
  const auto it = entries.find(lower);
  return it == entries.end() ? nullptr : &it->second;
}

const std::unordered_set<std::string>& ResourceBundle::wordlist(const std::string& name) const {
  static const std::unordered_set<std::string> empty;
  const auto it = wordlists.find(name);
  return it == wordlists.end() ? empty : it->second;
}

const std::unordered_map<std::string, double>* ResourceBundle::scalar(const std::string& name) const {
  const auto it = scalar_lexicons.find(name);
  return it == scalar_lexicons.end() ? nullptr : &it->second;
}

const NgramTable& ResourceBundle::ngram_table(const std::string& genre) const {
  const auto it = ngram_tables.find(genre);
  if (it == ngram_tables.end()) throw DataError("missing n-gram table for genre " + genre);
  return it->second;
}

std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path) {
  std::unordered_set<std::string> out;
  for_each_line(path, [&](std::string_view line, std::size_t) {
    std::string w = utf8::ascii_lower(line);
    while (!w.empty() && w.back() == ' ') w.pop_back();
    if (!w.empty()) out.insert(std::move(w));
  });
  return out;
}

std::unordered_map<std::string, double> load_scalar_lexicon(const std::filesystem::path& path) {
  std::unordered_map<std::string, double> out;
  for_each_line(path, [&](std::string_view line, std::size_t no) {
    const auto cols = split(line, '\t');
    if (cols.size() != 2) throw DataError(where(path, no) + "expected word<TAB>value");
    out[utf8::ascii_lower(cols[0])] = parse_real(cols[1], path, no);
  });
  return out;
}

AffectLexicon load_affect_lexicon(const std::filesystem::path& path) {
  AffectLexicon lex;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, double>>>> rows;
  for_each_line(path, [&](std::string_view line, std::size_t no) {
    const auto cols = split(line, '\t');
    if (cols.size() != 2) throw DataError(where(path, no) + "expected word<TAB>cat=value,...");
    std::vector<std::pair<std::size_t, double>> scores;
    for (auto item : split(cols[1], ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) throw DataError(where(path, no) + "expected cat=value");
      std::string cat(item.substr(0, eq));
      auto [it, fresh] = index.emplace(cat, lex.categories.size());
      if (fresh) lex.categories.push_back(cat);
      scores.emplace_back(it->second, parse_real(item.substr(eq + 1), path, no));
    }
    rows.emplace_back(utf8::ascii_lower(cols[0]), std::move(scores));
  });
  for (auto& [word, scores] : rows) {
    auto& vec = lex.entries[word];
    vec.resize(lex.categories.size(), 0.0);
    for (auto [k, v] : scores) vec[k] = v;
  }
  return lex;
}

void load_ngram_file(const std::filesystem::path& path, std::map<std::string, NgramTable>& tables) {
  for_each_line(path, [&](std::string_view line, std::size_t no) {
    const auto cols = split(line, '\t');
    if (cols.size() != 4) throw DataError(where(path, no) + "expected n<TAB>genre<TAB>ngram<TAB>logfreq");
    int n = 0;
    const auto [p, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), n);
    if (ec != std::errc() || p != cols[0].data() + cols[0].size() || n < 1 || n > kMaxNgram)
      throw DataError(where(path, no) + "n must be in [1,5]");
    const std::string genre(cols[1]);
    if (std::find_if(kGenres.begin(), kGenres.end(), [&](const char* g) { return genre == g; }) == kGenres.end())
      throw DataError(where(path, no) + "unknown genre " + genre);
    const std::string gram = utf8::ascii_lower(cols[2]);
    if (static_cast<int>(std::count(gram.begin(), gram.end(), ' ')) != n - 1)
      throw DataError(where(path, no) + "n-gram length does not match n");
    tables[genre].by_order[static_cast<std::size_t>(n - 1)][gram] = parse_real(cols[3], path, no);
  });
}

ResourceBundle ResourceBundle::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("resource directory not found: " + dir.string());
  ResourceBundle b;
  for (const auto& f : files_in(dir / "wordlists", ".txt")) b.wordlists[f.stem().string()] = load_wordlist(f);
  for (const auto& f : files_in(dir / "scalar", ".tsv"))
    b.scalar_lexicons[f.stem().string()] = load_scalar_lexicon(f);
  for (const auto& f : files_in(dir / "affect", ".tsv"))
    b.affect_lexicons[f.stem().string()] = load_affect_lexicon(f);
  if (const auto prev = dir / "prevalence_categories.tsv"; std::filesystem::exists(prev)) {
    b.prevalence_categories = load_affect_lexicon(prev);
    if (b.prevalence_categories.categories.size() > kPrevalenceCategories)
      throw DataError(prev.string() + ": more than 35 prevalence categories");
  }
  for (const auto& f : files_in(dir / "ngrams", ".tsv")) load_ngram_file(f, b.ngram_tables);
  return b;
}

}  // namespace anxpipe::feat
