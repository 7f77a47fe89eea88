#pragma once

#include <vector>

#include "pausecws/mining.hpp"
#include "pausecws/model.hpp"
#include "pausecws/segmentation.hpp"
#include "pausecws/trainer.hpp"

namespace pausecws {

using GoldCorpus = std::vector<SegmentedSentence>;
using PartialCorpus = std::vector<PartialSentence>;
using RawCorpus = std::vector<Chars>;

// Drops words made only of punctuation, and sentences left empty.
GoldCorpus strip_punctuation(const GoldCorpus& corpus);
bool is_punctuation_word(const Chars& chars, Span span);

// Constrained Viterbi over the mask built from the asserted boundaries.
SegmentedSentence complete_annotation(const CrfModel& model, const PartialSentence& p);
// Unconstrained Viterbi.
SegmentedSentence self_train_label(const CrfModel& model, const Chars& sentence);
SegmentedSentence segment(const CrfModel& model, const Chars& sentence);
GoldCorpus segment_all(const CrfModel& model, const RawCorpus& sentences, int workers = 1);

std::vector<TrainingExample> labeled_examples(const GoldCorpus& corpus);

struct PipelineResult {
  CrfModel model;            // step-3 model
  CrfModel baseline;         // step-1 model
  GoldCorpus completed;      // step-2 output (empty for partial-CRF)
  int target_used = 0;       // target sentences entering the final training run
  int target_dropped = 0;    // sentences without boundaries (mode-dependent)
  int target_skipped = 0;    // sentences whose completion had no legal path
  TrainLog baseline_log;
  TrainLog final_log;
};

// Complete-then-train. Mode Ctt completes with constrained Viterbi; mode
// SelfTraining labels with unconstrained Viterbi. The final model is trained
// from scratch on source plus completed target. Throws Error(EmptyDataset)
// when the source is empty.
PipelineResult run_ctt(const GoldCorpus& source, const PartialCorpus& target, const TrainConfig& config);

// One training run mixing the full loss on source and the partial loss on the
// target masks.
PipelineResult run_partial_crf(const GoldCorpus& source, const PartialCorpus& target,
                               const TrainConfig& config);

CrfModel train_baseline(const GoldCorpus& source, const TrainConfig& config, TrainLog* log = nullptr);

}  // namespace pausecws
