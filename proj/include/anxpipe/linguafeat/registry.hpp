#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "anxpipe/linguafeat/resources.hpp"

namespace anxpipe::feat {

enum class Family { morphosyntactic, lexical, ngram, readability, lexicon };

std::string_view to_string(Family family);

struct FeatureEntry {
  std::string id;     // "<family prefix>.<name>", e.g. "read.ARI"
  Family family;
  std::size_t index;  // position in the family's output vector
};

inline constexpr std::size_t kDefaultTargetFeatures = 168;

/// Ordered feature list: morphosyntactic (19), lexical (52), register
/// n-grams (25), readability (14), then one entry per affect-lexicon
/// category of the bundle. Starts with every entry selected; a mask from
/// recursive feature elimination narrows it.
class FeatureRegistry {
 public:
  static FeatureRegistry build(const ResourceBundle& resources);

  const std::vector<FeatureEntry>& entries() const { return entries_; }
  const std::vector<bool>& selection_mask() const { return mask_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t selected_count() const;

  std::vector<std::string> all_ids() const;
  std::vector<std::string> selected_ids() const;

  void select(const std::vector<bool>& mask);
  /// Throws DataError for an id the registry does not hold.
  void select_ids(const std::vector<std::string>& ids);

  bool family_selected(Family family) const;

 private:
  std::vector<FeatureEntry> entries_;
  std::vector<bool> mask_;
};

}  // namespace anxpipe::feat
