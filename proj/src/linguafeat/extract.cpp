#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"

namespace anxpipe::feat {

std::vector<std::pair<std::size_t, std::size_t>> window_spans(std::size_t sentences, std::size_t window_len,
                                                              std::size_t stride) {
  if (window_len == 0 || stride == 0) throw DataError("window_len and stride must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t start = 0; start < sentences; start += stride)
    out.emplace_back(start, std::min(start + window_len, sentences));
  return out;
}

FeatureMatrix extract_feature_matrix(const corpus::Post& post, const FeatureRegistry& registry,
                                     const ResourceBundle& resources, const ExtractOptions& options) {
  const auto sentences = segment_sentences(post.clean_text);
  std::vector<SyntaxAnnotation> annotations;
  annotations.reserve(sentences.size());
  for (const auto& s : sentences) annotations.push_back(annotate_syntax(s));

  const auto spans = window_spans(sentences.size(), options.window_len, options.stride);
  const auto& entries = registry.entries();
  const auto& mask = registry.selection_mask();
  const bool want_morph = registry.family_selected(Family::morphosyntactic);
  const bool want_lex = registry.family_selected(Family::lexical);
  const bool want_ngram = registry.family_selected(Family::ngram);
  const bool want_read = registry.family_selected(Family::readability);
  const bool want_lexicon = registry.family_selected(Family::lexicon);

  FeatureMatrix m;
  m.post_id = post.id;
  m.feature_ids = registry.selected_ids();
  m.rows.resize(static_cast<Eigen::Index>(spans.size()), static_cast<Eigen::Index>(m.feature_ids.size()));

  for (std::size_t w = 0; w < spans.size(); ++w) {
    const auto [b, e] = spans[w];
    const Window window(sentences.data() + b, e - b);
    const std::span<const SyntaxAnnotation> ann(annotations.data() + b, e - b);
    bool has_word = false;
    for (const auto& s : window)
      for (const auto& t : s.tokens) has_word = has_word || t.is_word;

    std::vector<double> morph, lex, ngram, read, lexicon;
    if (want_morph) morph = morphosyntactic_features(window, ann, options.seed);
    if (want_ngram) ngram = ngram_register_features(window, resources);
    if (has_word) {
      if (want_lex) lex = lexical_richness_features(window, resources);
      if (want_read) read = readability_features(window, resources);
      if (want_lexicon) lexicon = lexicon_features(window, resources);
    }
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!mask[i]) continue;
      const auto& entry = entries[i];
      const std::vector<double>* src = nullptr;
      switch (entry.family) {
        case Family::morphosyntactic: src = &morph; break;
        case Family::lexical: src = &lex; break;
        case Family::ngram: src = &ngram; break;
        case Family::readability: src = &read; break;
        case Family::lexicon: src = &lexicon; break;
      }
      m.rows(static_cast<Eigen::Index>(w), col++) = entry.index < src->size() ? (*src)[entry.index] : 0.0;
    }
  }
  return m;
}

std::vector<FeatureMatrix> extract_all(const corpus::PostCollection& posts, const FeatureRegistry& registry,
                                       const ResourceBundle& resources, const ExtractOptions& options,
                                       unsigned jobs) {
  std::vector<FeatureMatrix> out(posts.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(posts.size(), 1))));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(posts.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < posts.size(); i = next++) {
        try {
          out[i] = extract_feature_matrix(posts[i], registry, resources, options);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw DataError("post " + posts[i].id + ": " + e.what());
    }
  }
  return out;
}

}  // namespace anxpipe::feat
