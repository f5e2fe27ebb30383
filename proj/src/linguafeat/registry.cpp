#include "anxpipe/linguafeat/registry.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/families.hpp"

namespace anxpipe::feat {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::morphosyntactic: return "morphosyntactic";
    case Family::lexical: return "lexical";
    case Family::ngram: return "ngram";
    case Family::readability: return "readability";
    case Family::lexicon: return "lexicon";
  }
  return "";
}

FeatureRegistry FeatureRegistry::build(const ResourceBundle& resources) {
  FeatureRegistry r;
  auto add = [&](const std::vector<std::string>& names, Family family, const char* prefix) {
    for (std::size_t i = 0; i < names.size(); ++i) r.entries_.push_back({std::string(prefix) + names[i], family, i});
  };
  add(morphosyntactic_names(), Family::morphosyntactic, "morph.");
  add(lexical_names(), Family::lexical, "lex.");
  add(ngram_names(), Family::ngram, "ngram.");
  add(readability_names(), Family::readability, "read.");
  add(lexicon_names(resources), Family::lexicon, "lexicon.");
  std::set<std::string> seen;
  for (const auto& e : r.entries_)
    if (!seen.insert(e.id).second) throw DataError("duplicate feature id " + e.id);
  r.mask_.assign(r.entries_.size(), true);
  return r;
}

std::size_t FeatureRegistry::selected_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<std::string> FeatureRegistry::all_ids() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

std::vector<std::string> FeatureRegistry::selected_ids() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (mask_[i]) out.push_back(entries_[i].id);
  return out;
}

void FeatureRegistry::select(const std::vector<bool>& mask) {
  if (mask.size() != entries_.size()) throw DataError("selection mask size does not match registry");
  mask_ = mask;
}

void FeatureRegistry::select_ids(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < entries_.size(); ++i) index.emplace(entries_[i].id, i);
  std::vector<bool> mask(entries_.size(), false);
  for (const auto& id : ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw DataError("feature id not in registry: " + id);
    mask[it->second] = true;
  }
  mask_ = std::move(mask);
}

bool FeatureRegistry::family_selected(Family family) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (mask_[i] && entries_[i].family == family) return true;
  return false;
}

}  // namespace anxpipe::feat
