#include "pausecws/trainer.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pausecws/error.hpp"
#include "pausecws/eval.hpp"

namespace pausecws {

namespace {

// Adds scale * E[counts] under the distribution described by (pot, fb).
void add_expected_counts(const EncodedSentence& enc, const Potentials& pot, const ForwardBackward& fb,
                         const CrfModel& model, std::span<double> grad, double scale) {
  const int n = enc.length;
  const auto unary = unary_marginals(pot, fb);
  for (int i = 0; i < n; ++i) {
    const std::int32_t* ids = enc.row(i);
    for (int t = 0; t < enc.num_templates; ++t) {
      double* g = grad.data() + static_cast<std::size_t>(ids[t]) * kNumLabels;
      for (int l = 0; l < kNumLabels; ++l) g[l] += scale * unary[i][l];
    }
  }
  for (Label l : kAllLabels) {
    grad[model.start_index(l)] += scale * unary[0][index_of(l)];
    grad[model.end_index(l)] += scale * unary[n - 1][index_of(l)];
  }
  if (n < 2) return;
  const auto pair = bigram_marginals(pot, fb);
  for (int i = 0; i + 1 < n; ++i) {
    for (Label a : kAllLabels) {
      for (Label b : kAllLabels) grad[model.transition_index(a, b)] += scale * pair(i, a, b);
    }
  }
}

void add_path_counts(const EncodedSentence& enc, const TagSeq& tags, const CrfModel& model,
                     std::span<double> grad, double scale) {
  for (int i = 0; i < enc.length; ++i) {
    const std::int32_t* ids = enc.row(i);
    for (int t = 0; t < enc.num_templates; ++t) grad[model.emission_index(ids[t], tags[i])] += scale;
    if (i + 1 < enc.length) grad[model.transition_index(tags[i], tags[i + 1])] += scale;
  }
  grad[model.start_index(tags.front())] += scale;
  grad[model.end_index(tags.back())] += scale;
}

void check_gradient_size(const CrfModel& model, std::span<double> grad) {
  if (grad.size() != model.num_parameters()) {
    throw Error(ErrorKind::LengthMismatch, "gradient buffer does not match the model");
  }
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

struct EncodedExample {
  EncodedSentence enc;
  const TrainingExample* source;
};

double dev_f1(const CrfModel& model, const std::vector<SegmentedSentence>& dev) {
  std::vector<SegmentedSentence> pred;
  pred.reserve(dev.size());
  for (const auto& g : dev) {
    pred.push_back(g.size() == 0 ? g : labels_to_words(viterbi(g.chars(), model), g.chars()));
  }
  return prf(dev, pred).f1;
}

}  // namespace

const Chars& chars_of(const TrainingExample& ex) {
  return std::visit([](const auto& e) -> const Chars& { return e.chars; }, ex);
}

double accumulate_nll(const EncodedSentence& enc, const TagSeq& tags, const CrfModel& model,
                      std::span<double> grad, double scale) {
  check_gradient_size(model, grad);
  if (static_cast<int>(tags.size()) != enc.length) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(tags.size()) + " tags for " +
                                               std::to_string(enc.length) + " characters");
  }
  if (enc.length == 0) return 0.0;
  validate_tags(tags);
  const Potentials pot = model.potentials(enc);
  const ForwardBackward fb = forward_backward(pot);
  add_expected_counts(enc, pot, fb, model, grad, scale);
  add_path_counts(enc, tags, model, grad, -scale);
  return fb.log_z - score_sequence(pot, tags);
}

double accumulate_partial_nll(const EncodedSentence& enc, const ConstraintMask& mask, const CrfModel& model,
                              std::span<double> grad, double scale) {
  check_gradient_size(model, grad);
  if (mask.size() != enc.length) {
    throw Error(ErrorKind::LengthMismatch, "mask of length " + std::to_string(mask.size()) +
                                               " for sentence of length " + std::to_string(enc.length));
  }
  if (enc.length == 0) return 0.0;
  const Potentials pot = model.potentials(enc);
  const ForwardBackward full = forward_backward(pot);
  const ForwardBackward constrained = forward_backward(pot, &mask);
  add_expected_counts(enc, pot, full, model, grad, scale);
  add_expected_counts(enc, pot, constrained, model, grad, -scale);
  return full.log_z - constrained.log_z;
}

LossAndGradient nll_loss_and_grad(std::span<const LabeledExample> batch, const CrfModel& model) {
  LossAndGradient out;
  out.gradient.assign(model.num_parameters(), 0.0);
  for (const auto& ex : batch) out.loss += accumulate_nll(model.encode(ex.chars), ex.tags, model, out.gradient);
  return out;
}

LossAndGradient partial_nll_loss_and_grad(std::span<const PartialExample> batch, const CrfModel& model) {
  LossAndGradient out;
  out.gradient.assign(model.num_parameters(), 0.0);
  for (const auto& ex : batch) {
    out.loss += accumulate_partial_nll(model.encode(ex.chars), ex.mask, model, out.gradient);
  }
  return out;
}

std::string_view mode_name(TrainMode mode) noexcept {
  switch (mode) {
    case TrainMode::Baseline: return "baseline";
    case TrainMode::Ctt: return "ctt";
    case TrainMode::SelfTraining: return "self_training";
    case TrainMode::PartialCrf: return "partial_crf";
  }
  return "baseline";
}

TrainMode mode_from_name(std::string_view name) {
  for (TrainMode m : {TrainMode::Baseline, TrainMode::Ctt, TrainMode::SelfTraining, TrainMode::PartialCrf}) {
    if (mode_name(m) == name) return m;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown mode " + std::string(name));
}

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorKind::InvalidArgument, "epochs must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(ErrorKind::InvalidArgument, "threshold must lie in [0, 1]");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorKind::InvalidArgument, "learning rate must be positive");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw Error(ErrorKind::InvalidArgument, "l2 must be non-negative");
  if (batch_chars < 1) throw Error(ErrorKind::InvalidArgument, "batch size must be >= 1 character");
  if (workers < 1) throw Error(ErrorKind::InvalidArgument, "workers must be >= 1");
}

void train_in_place(CrfModel& model, const std::vector<TrainingExample>& data, const TrainConfig& config,
                    TrainLog* log) {
  config.validate();
  std::vector<EncodedExample> examples;
  examples.reserve(data.size());
  for (const auto& ex : data) {
    if (chars_of(ex).empty()) continue;
    if (const auto* p = std::get_if<PartialExample>(&ex); p && p->mask.unrestricted()) continue;
    examples.push_back({model.encode(chars_of(ex)), &ex});
  }
  if (examples.empty() && data.empty()) throw Error(ErrorKind::EmptyDataset, "no training sentences");

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> grad(model.num_parameters(), 0.0);
  std::span<double> w = model.weights();
  std::vector<double> best_weights;
  double best_f1 = -1.0;
  TrainLog local;

  // The batch gradient is the plain sum over its sentences.
  auto apply_update = [&] {
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (!std::isfinite(w[k])) continue;
      w[k] -= config.learning_rate * (grad[k] + config.l2 * w[k]);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
  };

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0.0;
    int batch_chars = 0;
    std::size_t batch_sentences = 0;
    for (std::size_t idx : order) {
      const EncodedExample& ex = examples[idx];
      if (const auto* lab = std::get_if<LabeledExample>(ex.source)) {
        epoch_loss += accumulate_nll(ex.enc, lab->tags, model, grad);
      } else {
        epoch_loss += accumulate_partial_nll(ex.enc, std::get<PartialExample>(*ex.source).mask, model, grad);
      }
      batch_chars += ex.enc.length;
      ++batch_sentences;
      if (batch_chars >= config.batch_chars) {
        apply_update();
        batch_chars = 0;
        batch_sentences = 0;
      }
    }
    if (batch_sentences > 0) apply_update();

    EpochRecord rec{epoch, epoch_loss, -1.0};
    if (config.dev) {
      rec.dev_f1 = dev_f1(model, *config.dev);
      if (rec.dev_f1 > best_f1) {
        best_f1 = rec.dev_f1;
        best_weights.assign(w.begin(), w.end());
        local.selected_epoch = epoch;
      }
    } else {
      local.selected_epoch = epoch;
    }
    local.epochs.push_back(rec);
  }
  if (config.dev && !best_weights.empty()) std::copy(best_weights.begin(), best_weights.end(), w.begin());
  if (log) *log = std::move(local);
}

CrfModel train(const std::vector<TrainingExample>& data, const TrainConfig& config, TrainLog* log) {
  config.validate();
  if (data.empty()) throw Error(ErrorKind::EmptyDataset, "no training sentences");
  std::vector<const Chars*> sentences;
  sentences.reserve(data.size());
  for (const auto& ex : data) sentences.push_back(&chars_of(ex));
  CrfModel model = CrfModel::for_sentences(sentences);
  train_in_place(model, data, config, log);
  return model;
}

}  // namespace pausecws
