#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pausecws/alignment.hpp"
#include "pausecws/crf.hpp"
#include "pausecws/error.hpp"
#include "pausecws/eval.hpp"
#include "pausecws/mining.hpp"
#include "pausecws/model.hpp"
#include "pausecws/pipeline.hpp"
#include "pausecws/segmentation.hpp"
#include "pausecws/tagset.hpp"
#include "pausecws/trainer.hpp"
#include "pausecws/utf8.hpp"

namespace py = pybind11;
using namespace pausecws;

namespace {

using Words = std::vector<std::string>;

GoldCorpus to_corpus(const std::vector<Words>& sentences) {
  GoldCorpus out;
  out.reserve(sentences.size());
  for (const auto& w : sentences) out.push_back(SegmentedSentence::from_words(w));
  return out;
}

std::vector<Words> from_corpus(const GoldCorpus& corpus) {
  std::vector<Words> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(s.words());
  return out;
}

TrainMode parse_mode(const std::string& mode) {
  if (mode == "ctt") return TrainMode::Ctt;
  if (mode == "self_training") return TrainMode::SelfTraining;
  if (mode == "partial_crf") return TrainMode::PartialCrf;
  throw Error(ErrorKind::InvalidArgument, "mode must be ctt, self_training or partial_crf");
}

TrainConfig make_config(int epochs, double learning_rate, double l2, int batch_chars, std::uint64_t seed) {
  TrainConfig c;
  c.epochs = epochs;
  c.learning_rate = learning_rate;
  c.l2 = l2;
  c.batch_chars = batch_chars;
  c.seed = seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the pausecws segmenter";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<CrfModel>(m, "Model")
      .def_static("load", &CrfModel::load_file, py::arg("path"))
      .def("save", &CrfModel::save_file, py::arg("path"))
      .def_static(
          "from_string",
          [](const std::string& text) {
            std::istringstream in(text);
            return CrfModel::load(in);
          },
          py::arg("text"))
      .def("to_string",
           [](const CrfModel& model) {
             std::ostringstream out;
             model.save(out);
             return out.str();
           })
      .def_property_readonly("num_features", &CrfModel::num_features)
      .def(
          "segment", [](const CrfModel& model, const std::string& text) { return segment(model, split_utf8(text)).words(); },
          py::arg("text"))
      .def(
          "tags", [](const CrfModel& model, const std::string& text) { return tags_to_string(viterbi(split_utf8(text), model)); },
          py::arg("text"))
      .def(
          "log_partition",
          [](const CrfModel& model, const std::string& text) { return log_partition(model.potentials(split_utf8(text))); },
          py::arg("text"))
      .def(
          "boundary_probabilities",
          [](const CrfModel& model, const std::string& text) {
            const Chars chars = split_utf8(text);
            std::vector<double> out;
            if (chars.size() < 2) return out;
            const auto bm = bigram_marginals(model.potentials(chars));
            for (int i = 0; i < bm.junctions(); ++i) out.push_back(bm.boundary_probability(i));
            return out;
          },
          py::arg("text"), "Boundary probability at each junction between adjacent characters.")
      .def("__eq__", [](const CrfModel& a, const CrfModel& b) { return a == b; });

  m.def(
      "train",
      [](const std::vector<Words>& gold, int epochs, double learning_rate, double l2, int batch_chars,
         std::uint64_t seed, const std::optional<std::vector<Words>>& dev) {
        TrainConfig c = make_config(epochs, learning_rate, l2, batch_chars, seed);
        GoldCorpus dev_corpus;
        if (dev) {
          dev_corpus = to_corpus(*dev);
          c.dev = &dev_corpus;
        }
        py::gil_scoped_release release;
        return train_baseline(to_corpus(gold), c);
      },
      py::arg("gold"), py::arg("epochs") = 10, py::arg("learning_rate") = 0.1, py::arg("l2") = 1e-5,
      py::arg("batch_chars") = 1000, py::arg("seed") = 1, py::arg("dev") = py::none(),
      "Train a segmenter on sentences given as lists of words.");

  m.def(
      "run_pipeline",
      [](const std::vector<Words>& source, const std::vector<std::pair<std::string, std::vector<int>>>& target,
         const std::string& mode, int epochs, double learning_rate, double l2, int batch_chars, std::uint64_t seed,
         const std::optional<std::vector<Words>>& dev, bool all_sentences) {
        TrainConfig c = make_config(epochs, learning_rate, l2, batch_chars, seed);
        c.mode = parse_mode(mode);
        c.self_train_all_sentences = all_sentences;
        GoldCorpus dev_corpus;
        if (dev) {
          dev_corpus = to_corpus(*dev);
          c.dev = &dev_corpus;
        }
        PartialCorpus partial;
        for (const auto& [text, boundaries] : target) {
          PartialSentence p{split_utf8(text), boundaries};
          p.validate();
          partial.push_back(std::move(p));
        }
        const GoldCorpus src = to_corpus(source);
        PipelineResult r;
        {
          py::gil_scoped_release release;
          r = c.mode == TrainMode::PartialCrf ? run_partial_crf(src, partial, c) : run_ctt(src, partial, c);
        }
        py::dict out;
        out["model"] = r.model;
        out["baseline"] = r.baseline;
        out["completed"] = from_corpus(r.completed);
        out["target_used"] = r.target_used;
        out["target_dropped"] = r.target_dropped;
        out["target_skipped"] = r.target_skipped;
        return out;
      },
      py::arg("source"), py::arg("target"), py::arg("mode") = "ctt", py::arg("epochs") = 10,
      py::arg("learning_rate") = 0.1, py::arg("l2") = 1e-5, py::arg("batch_chars") = 1000, py::arg("seed") = 1,
      py::arg("dev") = py::none(), py::arg("all_sentences") = false,
      "Train on gold source sentences plus target (text, boundary junctions) pairs.");

  m.def(
      "complete",
      [](const CrfModel& model, const std::string& text, std::vector<int> boundaries) {
        PartialSentence p{split_utf8(text), std::move(boundaries)};
        p.validate();
        return complete_annotation(model, p).words();
      },
      py::arg("model"), py::arg("text"), py::arg("boundaries"),
      "Best segmentation that keeps a boundary after every listed junction.");

  m.def(
      "detect_pauses",
      [](const std::string& alignment_json, double min_pause_ms) {
        py::list out;
        for (const CharAlignment& a : parse_alignment_json(alignment_json)) {
          py::list pauses;
          for (const Pause& p : detect_pauses(a, min_pause_ms)) pauses.append(py::make_tuple(p.junction, p.duration_ms));
          out.append(py::make_tuple(a.utterance_id, join_chars(a.characters()), pauses));
        }
        return out;
      },
      py::arg("alignment_json"), py::arg("min_pause_ms") = kDefaultMinPauseMs,
      "(utterance_id, text, [(junction, duration_ms)]) per utterance.");

  m.def(
      "prf",
      [](const std::vector<Words>& gold, const std::vector<Words>& pred) {
        const PrfScore s = prf(to_corpus(gold), to_corpus(pred));
        py::dict out;
        out["precision"] = s.precision;
        out["recall"] = s.recall;
        out["f1"] = s.f1;
        out["gold_words"] = s.gold_words;
        out["predicted_words"] = s.predicted_words;
        out["correct_words"] = s.correct_words;
        return out;
      },
      py::arg("gold"), py::arg("pred"));

  m.def(
      "strip_punctuation",
      [](const std::vector<Words>& sentences) { return from_corpus(strip_punctuation(to_corpus(sentences))); },
      py::arg("sentences"));

  m.def(
      "words_to_tags", [](const Words& words) { return tags_to_string(words_to_labels(SegmentedSentence::from_words(words))); },
      py::arg("words"));
  m.def(
      "tags_to_words",
      [](const std::string& tags, const std::string& text) {
        return labels_to_words(tags_from_string(tags), split_utf8(text)).words();
      },
      py::arg("tags"), py::arg("text"));
}
