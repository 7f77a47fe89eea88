#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pausecws/model.hpp"
#include "pausecws/segmentation.hpp"

namespace pausecws {

struct LabeledExample {
  Chars chars;
  TagSeq tags;
};

// A sentence whose supervision is a set of allowed labels per position.
struct PartialExample {
  Chars chars;
  ConstraintMask mask;
};

using TrainingExample = std::variant<LabeledExample, PartialExample>;

const Chars& chars_of(const TrainingExample& ex);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // laid out like CrfModel::weights()
};

// sum over the batch of log Z - score(gold). The gradient is expected minus
// observed feature counts; illegal entries carry 0.
LossAndGradient nll_loss_and_grad(std::span<const LabeledExample> batch, const CrfModel& model);

// sum over the batch of log Z - log Z_constrained. The gradient is full
// expected counts minus expected counts under the mask.
LossAndGradient partial_nll_loss_and_grad(std::span<const PartialExample> batch, const CrfModel& model);

// Per-sentence accumulation on pre-encoded input; returns the loss term and
// adds scale * d(loss)/d(weights) into grad.
double accumulate_nll(const EncodedSentence& enc, const TagSeq& tags, const CrfModel& model,
                      std::span<double> grad, double scale = 1.0);
double accumulate_partial_nll(const EncodedSentence& enc, const ConstraintMask& mask,
                              const CrfModel& model, std::span<double> grad, double scale = 1.0);

enum class TrainMode { Baseline, Ctt, SelfTraining, PartialCrf };

std::string_view mode_name(TrainMode mode) noexcept;
TrainMode mode_from_name(std::string_view name);

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-5;
  int batch_chars = 1000;
  std::uint64_t seed = 1;
  double threshold = 0.5;
  TrainMode mode = TrainMode::Baseline;
  // Self-training labels every target sentence, including those left without
  // any boundary after filtering.
  bool self_train_all_sentences = false;
  // Worker threads for per-sentence decoding; training reductions are always
  // sequential.
  int workers = 1;
  // Model selection: best-F1 epoch on this corpus when non-null.
  const std::vector<SegmentedSentence>* dev = nullptr;

  void validate() const;  // throws Error(InvalidArgument)
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double dev_f1 = -1.0;  // -1 without a dev corpus
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  int selected_epoch = 0;
};

// Mini-batch gradient descent on the summed full and partial losses plus
// (l2 / 2) * ||w||^2. The vocabulary is built from the training sentences.
// Deterministic for a given seed. Throws Error(EmptyDataset).
CrfModel train(const std::vector<TrainingExample>& data, const TrainConfig& config,
               TrainLog* log = nullptr);

// Continues training an existing model whose vocabulary is kept as is.
void train_in_place(CrfModel& model, const std::vector<TrainingExample>& data,
                    const TrainConfig& config, TrainLog* log = nullptr);

}  // namespace pausecws
