#pragma once

#include "anxpipe/linguafeat/text.hpp"

namespace anxpipe::feat {

/// Shallow syntactic counts for one sentence.
struct SyntaxAnnotation {
  int clause_count = 0;
  int t_unit_count = 1;
  int dependent_clause_count = 0;
  int complex_t_unit_count = 0;
  int coordinate_phrase_count = 0;
  int complex_nominal_count = 0;
  int verb_phrase_count = 0;
  int noun_phrase_count = 0;
  int np_premod_words = 0;
  int np_postmod_words = 0;

  SyntaxAnnotation& operator+=(const SyntaxAnnotation& o);
};

/// Rule-based annotator over the part-of-speech classes of the tokens.
///
/// Verb group: a run of verb tokens, possibly interrupted by adverbs or
///   "not", or by a coordinator between two verbs ("ran and walked").
///   Every verb group is a verb phrase. A group whose first verb does not
///   directly follow "to" is finite and counts as a clause.
/// Dependent clause: a clause whose group is the first after a subordinator
///   (because although when while if that which who since unless whereas).
/// T-unit: opened by the first independent clause; each later independent
///   clause that follows a clause-joining coordinator (and but or so) opens
///   another. At least one per sentence. A T-unit holding a dependent
///   clause is complex.
/// Coordinate phrase: a coordinator whose neighbours share a class.
/// Noun phrase: a maximal run of adjective/noun tokens containing a noun.
///   Its head is the last noun; tokens before the head are premodifiers.
///   Postmodifiers are a following prepositional phrase (through the next
///   noun) or relative clause (through its verb group). A noun phrase with
///   a premodifier or a relative-clause postmodifier is a complex nominal.
SyntaxAnnotation annotate_syntax(const Sentence& sentence);

}  // namespace anxpipe::feat
