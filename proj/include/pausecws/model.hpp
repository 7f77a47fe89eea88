#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pausecws/crf.hpp"
#include "pausecws/features.hpp"

namespace pausecws {

// Trainable parameters of the segmenter: one weight per (feature id, label),
// plus transition, start and end weights. All parameters live in one flat
// vector so that losses, gradients and updates share a single layout:
//
//   [ emissions: num_features * 4 | transitions: 16 | start: 4 | end: 4 ]
//
// Illegal transition/start/end entries hold -inf and are never updated.
class CrfModel {
 public:
  CrfModel() = default;
  // Zero-initialised model over a frozen vocabulary.
  CrfModel(FeatureTemplateSet templates, FeatureVocabulary vocab);

  // Model built from the features of the given sentences.
  static CrfModel for_sentences(const std::vector<const Chars*>& sentences,
                                FeatureTemplateSet templates = default_templates());

  const FeatureTemplateSet& templates() const noexcept { return templates_; }
  const FeatureVocabulary& vocabulary() const noexcept { return vocab_; }
  int num_features() const noexcept { return vocab_.size(); }

  std::size_t num_parameters() const noexcept { return weights_.size(); }
  std::span<double> weights() noexcept { return weights_; }
  std::span<const double> weights() const noexcept { return weights_; }

  std::size_t emission_index(std::int32_t feature, Label l) const noexcept {
    return static_cast<std::size_t>(feature) * kNumLabels + index_of(l);
  }
  std::size_t transition_index(Label from, Label to) const noexcept {
    return transitions_offset() + index_of(from) * kNumLabels + index_of(to);
  }
  std::size_t start_index(Label l) const noexcept { return transitions_offset() + 16 + index_of(l); }
  std::size_t end_index(Label l) const noexcept { return transitions_offset() + 20 + index_of(l); }

  double& emission(std::int32_t feature, Label l) { return weights_.at(emission_index(feature, l)); }
  double emission(std::int32_t feature, Label l) const { return weights_.at(emission_index(feature, l)); }
  double& transition(Label from, Label to) { return weights_.at(transition_index(from, to)); }
  double transition(Label from, Label to) const { return weights_.at(transition_index(from, to)); }
  double& start(Label l) { return weights_.at(start_index(l)); }
  double start(Label l) const { return weights_.at(start_index(l)); }
  double& end(Label l) { return weights_.at(end_index(l)); }
  double end(Label l) const { return weights_.at(end_index(l)); }

  // Sets the weight of a named feature; the feature must be in the vocabulary.
  void set_feature_weight(const std::string& feature, Label l, double w);

  EncodedSentence encode(const Chars& sentence) const;
  std::vector<LabelRow> emission_scores(const Chars& sentence) const;
  std::vector<LabelRow> emission_scores(const EncodedSentence& enc) const;
  Potentials potentials(const Chars& sentence) const;
  Potentials potentials(const EncodedSentence& enc) const;

  // Structural check: illegal entries are -inf, everything else finite.
  bool well_formed() const noexcept;

  void save(std::ostream& out) const;
  static CrfModel load(std::istream& in);  // throws Error(ParseError)
  void save_file(const std::string& path) const;
  static CrfModel load_file(const std::string& path);

  friend bool operator==(const CrfModel& a, const CrfModel& b);

 private:
  std::size_t transitions_offset() const noexcept {
    return static_cast<std::size_t>(vocab_.size()) * kNumLabels;
  }
  void init_structure();

  FeatureTemplateSet templates_;
  FeatureVocabulary vocab_;
  std::vector<double> weights_;
};

// Model-level convenience wrappers over the potential-based routines.
double score_sequence(const Chars& sentence, const TagSeq& tags, const CrfModel& model);
double log_partition(const Chars& sentence, const CrfModel& model, const ConstraintMask* mask = nullptr);
BigramMarginals bigram_marginals(const Chars& sentence, const CrfModel& model);
double boundary_probability(const Chars& sentence, const CrfModel& model, int junction);
TagSeq viterbi(const Chars& sentence, const CrfModel& model, const ConstraintMask* mask = nullptr);

}  // namespace pausecws
