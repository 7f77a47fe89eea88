#include "pausecws/features.hpp"

#include "pausecws/error.hpp"

namespace pausecws {

FeatureTemplateSet default_templates() {
  return {
      {"U-2", {-2}},    {"U-1", {-1}},    {"U0", {0}},     {"U+1", {1}},     {"U+2", {2}},
      {"B-2", {-2, -1}}, {"B-1", {-1, 0}}, {"B0", {0, 1}}, {"B+1", {1, 2}},
  };
}

std::string_view char_at(const Chars& sentence, int i) noexcept {
  if (i < 0) return kBos;
  if (i >= static_cast<int>(sentence.size())) return kEos;
  return sentence[i];
}

namespace {

void render(std::string& out, const Chars& sentence, int position, const FeatureTemplate& t) {
  out.assign(t.name);
  out += '=';
  for (std::size_t k = 0; k < t.offsets.size(); ++k) {
    if (k) out += kNgramSeparator;
    out += char_at(sentence, position + t.offsets[k]);
  }
}

}  // namespace

std::vector<std::string> extract_features(const Chars& sentence, int position,
                                          const FeatureTemplateSet& templates) {
  std::vector<std::string> out(templates.size());
  for (std::size_t t = 0; t < templates.size(); ++t) render(out[t], sentence, position, templates[t]);
  return out;
}

FeatureVocabulary::FeatureVocabulary(int num_templates) : num_templates_(num_templates) {}

std::int32_t FeatureVocabulary::add(const std::string& feature, int template_index) {
  if (auto it = ids_.find(feature); it != ids_.end()) return it->second;
  if (frozen_) return lookup(feature, template_index);
  if (template_index < 0 || template_index >= num_templates_) {
    throw Error(ErrorKind::IndexOutOfRange, "template " + std::to_string(template_index));
  }
  const auto id = static_cast<std::int32_t>(size());
  ids_.emplace(feature, id);
  names_.push_back(feature);
  templates_.push_back(template_index);
  return id;
}

std::int32_t FeatureVocabulary::lookup(const std::string& feature, int template_index) const {
  if (auto it = ids_.find(feature); it != ids_.end()) return it->second;
  return template_index;
}

bool FeatureVocabulary::contains(const std::string& feature) const { return ids_.contains(feature); }

const std::string& FeatureVocabulary::name(std::int32_t id) const {
  if (id < num_templates_ || id >= size()) throw Error(ErrorKind::IndexOutOfRange, "feature id " + std::to_string(id));
  return names_[id - num_templates_];
}

int FeatureVocabulary::template_of(std::int32_t id) const {
  if (id < num_templates_) return id;
  if (id >= size()) throw Error(ErrorKind::IndexOutOfRange, "feature id " + std::to_string(id));
  return templates_[id - num_templates_];
}

void add_sentence_features(FeatureVocabulary& vocab, const Chars& sentence,
                           const FeatureTemplateSet& templates) {
  std::string buf;
  for (int i = 0; i < static_cast<int>(sentence.size()); ++i) {
    for (std::size_t t = 0; t < templates.size(); ++t) {
      render(buf, sentence, i, templates[t]);
      vocab.add(buf, static_cast<int>(t));
    }
  }
}

EncodedSentence encode(const Chars& sentence, const FeatureTemplateSet& templates,
                       const FeatureVocabulary& vocab) {
  EncodedSentence enc;
  enc.length = static_cast<int>(sentence.size());
  enc.num_templates = static_cast<int>(templates.size());
  enc.ids.reserve(sentence.size() * templates.size());
  std::string buf;
  for (int i = 0; i < enc.length; ++i) {
    for (std::size_t t = 0; t < templates.size(); ++t) {
      render(buf, sentence, i, templates[t]);
      enc.ids.push_back(vocab.lookup(buf, static_cast<int>(t)));
    }
  }
  return enc;
}

}  // namespace pausecws
