#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pausecws/utf8.hpp"

namespace pausecws {

inline constexpr std::string_view kBos = "⟨BOS⟩";
inline constexpr std::string_view kEos = "⟨EOS⟩";
// Joins the characters of an n-gram inside a feature string.
inline constexpr char kNgramSeparator = '\x1F';

struct FeatureTemplate {
  std::string name;
  std::vector<int> offsets;

  friend bool operator==(const FeatureTemplate&, const FeatureTemplate&) = default;
};

using FeatureTemplateSet = std::vector<FeatureTemplate>;

// Unigrams U-2..U+2 and bigrams B-2, B-1, B0, B+1 over a five-character window.
FeatureTemplateSet default_templates();

// Character at position i, or a sentinel outside the sentence.
std::string_view char_at(const Chars& sentence, int i) noexcept;

// One "name=chars" string per template, in template order.
std::vector<std::string> extract_features(const Chars& sentence, int position,
                                          const FeatureTemplateSet& templates);

// Dense feature ids. Ids [0, num_templates) are the per-template UNK entries;
// observed features are numbered from num_templates upward in order of first
// insertion.
class FeatureVocabulary {
 public:
  FeatureVocabulary() = default;
  explicit FeatureVocabulary(int num_templates);

  int num_templates() const noexcept { return num_templates_; }
  int size() const noexcept { return num_templates_ + static_cast<int>(names_.size()); }
  bool frozen() const noexcept { return frozen_; }
  void freeze() noexcept { frozen_ = true; }

  // Returns the existing id, or adds the feature while unfrozen. Once frozen,
  // unseen features resolve to the UNK id of their template.
  std::int32_t add(const std::string& feature, int template_index);
  std::int32_t lookup(const std::string& feature, int template_index) const;
  bool contains(const std::string& feature) const;

  // Name of a non-UNK id.
  const std::string& name(std::int32_t id) const;
  // Template index recorded for a non-UNK id.
  int template_of(std::int32_t id) const;

 private:
  int num_templates_ = 0;
  bool frozen_ = false;
  std::unordered_map<std::string, std::int32_t> ids_;
  std::vector<std::string> names_;
  std::vector<int> templates_;
};

// Collects features from a set of sentences into an unfrozen vocabulary.
void add_sentence_features(FeatureVocabulary& vocab, const Chars& sentence,
                           const FeatureTemplateSet& templates);

// Feature ids of a sentence: row i holds one id per template.
struct EncodedSentence {
  int length = 0;
  int num_templates = 0;
  std::vector<std::int32_t> ids;

  const std::int32_t* row(int i) const noexcept { return ids.data() + static_cast<std::size_t>(i) * num_templates; }
};

EncodedSentence encode(const Chars& sentence, const FeatureTemplateSet& templates,
                       const FeatureVocabulary& vocab);

}  // namespace pausecws
