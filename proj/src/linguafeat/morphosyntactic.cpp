#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"

namespace anxpipe::feat {

namespace {

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

}  // namespace

const std::vector<std::string>& morphosyntactic_names() {
  static const std::vector<std::string> names{
      "MLC",     "MLS",         "MLT",      "C/S",     "C/T",     "DepC/C",   "T/S",
      "CompT/T", "DepC/T",      "CoordP/C", "CoordP/T", "NP.PostMod", "NP.PreMod", "CompN/C",
      "CompN/T", "VP/T",        "BaseKolDef", "MorKolDef", "SynKolDef"};
  return names;
}

std::string window_text(Window window) {
  std::string out;
  for (const auto& s : window) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

std::vector<double> morphosyntactic_ratios(Window window, std::span<const SyntaxAnnotation> annotations) {
  if (window.empty()) throw DataError("empty window");
  if (annotations.size() != window.size()) throw DataError("annotation count does not match sentence count");
  SyntaxAnnotation sum;
  sum.t_unit_count = 0;
  for (const auto& a : annotations) sum += a;
  double words = 0;
  for (const auto& s : window)
    for (const auto& t : s.tokens) words += t.is_word;
  const double sentences = static_cast<double>(window.size());
  const double clauses = sum.clause_count;
  const double tunits = sum.t_unit_count;
  const double nps = sum.noun_phrase_count;
  return {
      ratio(words, clauses),
      ratio(words, sentences),
      ratio(words, tunits),
      ratio(clauses, sentences),
      ratio(clauses, tunits),
      ratio(sum.dependent_clause_count, clauses),
      ratio(tunits, sentences),
      ratio(sum.complex_t_unit_count, tunits),
      ratio(sum.dependent_clause_count, tunits),
      ratio(sum.coordinate_phrase_count, clauses),
      ratio(sum.coordinate_phrase_count, tunits),
      ratio(sum.np_postmod_words, nps),
      ratio(sum.np_premod_words, nps),
      ratio(sum.complex_nominal_count, clauses),
      ratio(sum.complex_nominal_count, tunits),
      ratio(sum.verb_phrase_count, tunits),
  };
}

std::vector<double> morphosyntactic_features(Window window, std::span<const SyntaxAnnotation> annotations,
                                             std::uint64_t seed) {
  auto out = morphosyntactic_ratios(window, annotations);
  const std::string text = window_text(window);
  out.push_back(kolmogorov_complexity(text, KolmogorovMode::base, seed));
  out.push_back(kolmogorov_complexity(text, KolmogorovMode::morphological, seed));
  out.push_back(kolmogorov_complexity(text, KolmogorovMode::syntactic, seed));
  return out;
}

}  // namespace anxpipe::feat
