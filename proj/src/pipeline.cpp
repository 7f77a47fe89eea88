#include "pausecws/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <thread>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < count; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool keep_target(const PartialSentence& p, TrainMode mode, bool all_sentences) {
  if (p.chars.empty()) return false;
  if (mode == TrainMode::SelfTraining && all_sentences) return true;
  return !p.boundaries.empty();
}

}  // namespace

bool is_punctuation_word(const Chars& chars, Span span) {
  for (int i = span.begin; i < span.end; ++i) {
    if (!is_punctuation(decode_code_point(chars[i]))) return false;
  }
  return true;
}

GoldCorpus strip_punctuation(const GoldCorpus& corpus) {
  GoldCorpus out;
  for (const auto& s : corpus) {
    std::vector<std::string> kept;
    for (int k = 0; k < s.word_count(); ++k) {
      if (!is_punctuation_word(s.chars(), s.spans()[k])) kept.push_back(s.word(k));
    }
    if (!kept.empty()) out.push_back(SegmentedSentence::from_words(kept));
  }
  return out;
}

SegmentedSentence complete_annotation(const CrfModel& model, const PartialSentence& p) {
  if (p.chars.empty()) return {};
  const ConstraintMask mask = build_constraint_mask(p);
  return labels_to_words(viterbi(p.chars, model, &mask), p.chars);
}

SegmentedSentence self_train_label(const CrfModel& model, const Chars& sentence) {
  return segment(model, sentence);
}

SegmentedSentence segment(const CrfModel& model, const Chars& sentence) {
  if (sentence.empty()) return {};
  return labels_to_words(viterbi(sentence, model), sentence);
}

GoldCorpus segment_all(const CrfModel& model, const RawCorpus& sentences, int workers) {
  GoldCorpus out(sentences.size());
  parallel_for(static_cast<int>(sentences.size()), workers,
               [&](int i) { out[i] = segment(model, sentences[i]); });
  return out;
}

std::vector<TrainingExample> labeled_examples(const GoldCorpus& corpus) {
  std::vector<TrainingExample> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) {
    if (s.size() > 0) out.emplace_back(LabeledExample{s.chars(), words_to_labels(s)});
  }
  return out;
}

CrfModel train_baseline(const GoldCorpus& source, const TrainConfig& config, TrainLog* log) {
  auto data = labeled_examples(source);
  if (data.empty()) throw Error(ErrorKind::EmptyDataset, "source corpus is empty");
  return train(data, config, log);
}

PipelineResult run_ctt(const GoldCorpus& source, const PartialCorpus& target, const TrainConfig& config) {
  config.validate();
  if (config.mode != TrainMode::Ctt && config.mode != TrainMode::SelfTraining) {
    throw Error(ErrorKind::InvalidArgument, "run_ctt expects mode ctt or self_training");
  }
  PipelineResult r;
  r.baseline = train_baseline(source, config, &r.baseline_log);

  std::vector<const PartialSentence*> selected;
  for (const auto& p : target) {
    if (keep_target(p, config.mode, config.self_train_all_sentences)) {
      selected.push_back(&p);
    } else {
      ++r.target_dropped;
    }
  }

  std::vector<std::optional<SegmentedSentence>> completed(selected.size());
  parallel_for(static_cast<int>(selected.size()), config.workers, [&](int i) {
    const PartialSentence& p = *selected[i];
    if (config.mode == TrainMode::SelfTraining) {
      completed[i] = self_train_label(r.baseline, p.chars);
      return;
    }
    try {
      completed[i] = complete_annotation(r.baseline, p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoLegalPath) throw;
    }
  });
  for (auto& c : completed) {
    if (c) {
      r.completed.push_back(std::move(*c));
    } else {
      ++r.target_skipped;
    }
  }
  r.target_used = static_cast<int>(r.completed.size());

  auto data = labeled_examples(source);
  auto extra = labeled_examples(r.completed);
  data.insert(data.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  r.model = train(data, config, &r.final_log);
  return r;
}

PipelineResult run_partial_crf(const GoldCorpus& source, const PartialCorpus& target, const TrainConfig& config) {
  config.validate();
  PipelineResult r;
  r.baseline = train_baseline(source, config, &r.baseline_log);

  auto data = labeled_examples(source);
  for (const auto& p : target) {
    if (!keep_target(p, TrainMode::PartialCrf, false)) {
      ++r.target_dropped;
      continue;
    }
    try {
      data.emplace_back(PartialExample{p.chars, build_constraint_mask(p)});
      ++r.target_used;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoLegalPath) throw;
      ++r.target_skipped;
    }
  }
  r.model = train(data, config, &r.final_log);
  return r;
}

}  // namespace pausecws
