#include "anxpipe/linguafeat/syntax.hpp"

#include <array>
#include <string_view>

namespace anxpipe::feat {

namespace {

template <std::size_t N>
bool in(const std::array<std::string_view, N>& set, std::string_view w) {
  for (auto s : set)
    if (s == w) return true;
  return false;
}

constexpr std::array<std::string_view, 4> kCoordinators{"and", "but", "or", "so"};
constexpr std::array<std::string_view, 11> kSubordinators{"because", "although", "when", "while",  "if",     "that",
                                                          "which",   "who",      "since", "unless", "whereas"};
constexpr std::array<std::string_view, 5> kRelatives{"that", "which", "who", "whom", "whose"};
constexpr std::array<std::string_view, 14> kPrepositions{"of",   "in",    "on",   "at",     "with",  "for",   "from",
                                                         "about", "into", "over", "under", "after", "before", "like"};

bool nominal(PosClass p) { return p == PosClass::noun || p == PosClass::adj; }

bool coordinate_phrase_at(const std::vector<Token>& t, std::size_t i) {
  return i > 0 && i + 1 < t.size() && in(kCoordinators, t[i].lower) && t[i - 1].pos == t[i + 1].pos &&
         t[i - 1].pos != PosClass::function && t[i - 1].pos != PosClass::other;
}

// End (exclusive) of the verb group starting at `i`.
std::size_t verb_group_end(const std::vector<Token>& t, std::size_t i) {
  std::size_t j = i + 1;
  while (j < t.size()) {
    if (t[j].pos == PosClass::verb) {
      ++j;
    } else if ((t[j].pos == PosClass::adv || t[j].lower == "not") && j + 1 < t.size() &&
               t[j + 1].pos == PosClass::verb) {
      j += 2;
    } else if (coordinate_phrase_at(t, j) && t[j + 1].pos == PosClass::verb) {
      j += 2;
    } else {
      break;
    }
  }
  return j;
}

}  // namespace

SyntaxAnnotation& SyntaxAnnotation::operator+=(const SyntaxAnnotation& o) {
  clause_count += o.clause_count;
  t_unit_count += o.t_unit_count;
  dependent_clause_count += o.dependent_clause_count;
  complex_t_unit_count += o.complex_t_unit_count;
  coordinate_phrase_count += o.coordinate_phrase_count;
  complex_nominal_count += o.complex_nominal_count;
  verb_phrase_count += o.verb_phrase_count;
  noun_phrase_count += o.noun_phrase_count;
  np_premod_words += o.np_premod_words;
  np_postmod_words += o.np_postmod_words;
  return *this;
}

SyntaxAnnotation annotate_syntax(const Sentence& sentence) {
  const auto& t = sentence.tokens;
  SyntaxAnnotation a;
  a.t_unit_count = 0;

  bool pending_sub = false;
  bool pending_coord = false;
  bool unit_has_dep = false;
  for (std::size_t i = 0; i < t.size();) {
    const Token& tok = t[i];
    if (tok.pos == PosClass::verb) {
      const std::size_t end = verb_group_end(t, i);
      for (std::size_t k = i; k + 1 < end; ++k)
        if (coordinate_phrase_at(t, k)) ++a.coordinate_phrase_count;
      ++a.verb_phrase_count;
      const bool finite = i == 0 || t[i - 1].lower != "to";
      if (finite) {
        ++a.clause_count;
        if (pending_sub) {
          ++a.dependent_clause_count;
          unit_has_dep = true;
        } else if (a.t_unit_count == 0) {
          a.t_unit_count = 1;
        } else if (pending_coord) {
          if (unit_has_dep) ++a.complex_t_unit_count;
          unit_has_dep = false;
          ++a.t_unit_count;
        }
        pending_sub = false;
        pending_coord = false;
      }
      i = end;
      continue;
    }
    if (in(kSubordinators, tok.lower)) {
      pending_sub = true;
    } else if (in(kCoordinators, tok.lower)) {
      if (coordinate_phrase_at(t, i)) {
        ++a.coordinate_phrase_count;
      } else if (a.clause_count > 0) {
        pending_coord = true;
      }
    }
    ++i;
  }
  if (a.t_unit_count == 0) a.t_unit_count = 1;
  if (unit_has_dep) ++a.complex_t_unit_count;

  // noun phrases
  for (std::size_t i = 0; i < t.size();) {
    if (!nominal(t[i].pos)) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < t.size() && nominal(t[end].pos)) ++end;
    std::size_t head = end;
    for (std::size_t k = i; k < end; ++k)
      if (t[k].pos == PosClass::noun) head = k;
    if (head == end) {
      i = end;
      continue;
    }
    ++a.noun_phrase_count;
    const int premod = static_cast<int>(head - i);
    a.np_premod_words += premod;
    bool relative = false;
    std::size_t next = head + 1;
    if (next < t.size()) {
      if (in(kRelatives, t[next].lower)) {
        std::size_t k = next + 1;
        while (k < t.size() && t[k].pos != PosClass::verb) ++k;
        if (k < t.size()) {
          relative = true;
          a.np_postmod_words += static_cast<int>(verb_group_end(t, k) - next);
        }
      } else if (in(kPrepositions, t[next].lower)) {
        std::size_t k = next + 1;
        while (k < t.size() && t[k].pos != PosClass::noun && t[k].pos != PosClass::verb) ++k;
        if (k < t.size() && t[k].pos == PosClass::noun) a.np_postmod_words += static_cast<int>(k + 1 - next);
      }
    }
    if (premod > 0 || relative) ++a.complex_nominal_count;
    i = end;
  }
  return a;
}

}  // namespace anxpipe::feat
