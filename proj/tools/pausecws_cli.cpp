// pausecws command-line tool: mining, filtering, completion and training
// subcommands over the file formats of the library.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pausecws/alignment.hpp"
#include "pausecws/corpus_io.hpp"
#include "pausecws/error.hpp"
#include "pausecws/eval.hpp"
#include "pausecws/mining.hpp"
#include "pausecws/model.hpp"
#include "pausecws/pipeline.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace pausecws;

constexpr int kManifestVersion = 1;

// JSON config: top-level keys are global options, nested objects hold the
// options of the subcommand of the same name. A run manifest is accepted too;
// its "config" member is read.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return options_json(app, default_also).dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file: ") + e.what());
    }
    if (j.is_object() && j.contains("manifest_version") && j.contains("config")) j = j["config"];
    std::vector<CLI::ConfigItem> out;
    collect(j, "", {}, out);
    return out;
  }

  static json options_json(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->get_type_size() == 0) {
        if (opt->count() > 0 || default_also) j[name] = opt->count() > 0;
      } else if (opt->count() == 1) {
        j[name] = opt->results().at(0);
      } else if (opt->count() > 1) {
        j[name] = opt->results();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      if (sub->parsed()) j[sub->get_name()] = options_json(sub, default_also);
    }
    return j;
  }

 private:
  static void collect(const nlohmann::json& j, const std::string& name, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& out) {
    if (j.is_object()) {
      if (!name.empty()) parents.push_back(name);
      for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), parents, out);
      return;
    }
    if (name.empty()) throw CLI::ConversionError("config file must hold a JSON object");
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = name;
    auto scalar = [&](const nlohmann::json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number()) return v.dump();
      throw CLI::ConversionError("unsupported value for config key '" + name + "'");
    };
    if (j.is_array()) {
      for (const auto& v : j) item.inputs.push_back(scalar(v));
    } else {
      item.inputs.push_back(scalar(j));
    }
    out.push_back(std::move(item));
  }
};

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Globals {
  std::uint64_t seed = 1;
  double threshold = 0.5;
  double min_pause_ms = kDefaultMinPauseMs;
  int epochs = 10;
  double lr = 0.1;
  double l2 = 1e-5;
  int batch_chars = 1000;
  bool deterministic = false;
  int workers = 1;
  std::string tier_name = "characters";
};

// Collected per run and written to the manifest.
struct RunRecord {
  std::vector<std::string> outputs;
  json stats = json::object();
};

class Tool {
 public:
  Tool() : app_("Word boundary mining from speech pauses and cross-domain segmenter training", "pausecws") {
    app_.config_formatter(std::make_shared<ConfigJson>());
    app_.set_config("--config", "", "JSON config file or run manifest; command-line flags take precedence");
    app_.option_defaults()->always_capture_default();
    app_.require_subcommand(1, 1);

    app_.add_option("--seed", g_.seed, "Seed for shuffling and review ordering");
    app_.add_option("--threshold", g_.threshold, "Boundary probability threshold for keeping pauses")
        ->check(CLI::Range(0.0, 1.0));
    app_.add_option("--min-pause-ms", g_.min_pause_ms, "Shortest gap reported as a pause")
        ->check(CLI::PositiveNumber);
    app_.add_option("--epochs", g_.epochs, "Training epochs")->check(CLI::PositiveNumber);
    app_.add_option("--lr", g_.lr, "Learning rate")->check(CLI::PositiveNumber);
    app_.add_option("--l2", g_.l2, "L2 regularization strength")->check(CLI::NonNegativeNumber);
    app_.add_option("--batch-chars", g_.batch_chars, "Mini-batch size in characters")->check(CLI::PositiveNumber);
    app_.add_flag("--deterministic", g_.deterministic, "Single-threaded execution");
    app_.add_option("--workers", g_.workers, "Decoding threads")->check(CLI::PositiveNumber);
    app_.add_option("--tier-name", g_.tier_name, "TextGrid interval tier holding characters");

    add_train();
    add_mine();
    add_filter();
    add_complete();
    add_ctt("ctt", "Complete-then-train: baseline, constrained completion, retraining", TrainMode::Ctt);
    add_ctt("selftrain", "Self-training: baseline labels target text without constraints", TrainMode::SelfTraining);
    add_partialcrf();
    add_segment();
    add_eval();
    add_stats();
    add_disagree();
  }

  int run(int argc, char** argv) {
    std::vector<std::string> args = replay_args(argc, argv);
    try {
      app_.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app_.exit(e);
      return code == 0 ? 0 : 2;
    }
    try {
      action_();
      write_manifest();
    } catch (const Error& e) {
      std::cerr << "pausecws: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "pausecws: " << e.what() << '\n';
      return 1;
    }
    return 0;
  }

 private:
  // CLI11 wants arguments in reverse order. A config that is a run manifest
  // supplies its subcommand when none is given.
  std::vector<std::string> replay_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config;
    bool has_sub = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
      for (const CLI::App* sub : app_.get_subcommands({})) has_sub |= args[i] == sub->get_name();
    }
    if (!config.empty() && !has_sub) {
      std::ifstream in(config);
      const nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
      if (j.is_object() && j.contains("subcommand") && j["subcommand"].is_string()) {
        args.push_back(j["subcommand"].get<std::string>());
      }
    }
    std::reverse(args.begin(), args.end());
    return args;
  }

  TrainConfig train_config(TrainMode mode) const {
    TrainConfig c;
    c.epochs = g_.epochs;
    c.learning_rate = g_.lr;
    c.l2 = g_.l2;
    c.batch_chars = g_.batch_chars;
    c.seed = g_.seed;
    c.threshold = g_.threshold;
    c.mode = mode;
    c.workers = g_.deterministic ? 1 : g_.workers;
    return c;
  }

  int workers() const { return g_.deterministic ? 1 : g_.workers; }

  CLI::App* sub(const std::string& name, const std::string& help) {
    CLI::App* s = app_.add_subcommand(name, help);
    s->fallthrough();
    return s;
  }

  void output(const std::string& path) { record_.outputs.push_back(path); }

  // Manifest next to the primary output, or at --manifest.
  void write_manifest() {
    std::string path = manifest_path_;
    if (path.empty() && !record_.outputs.empty() && record_.outputs.front() != "-") {
      path = record_.outputs.front() + ".manifest.json";
    }
    if (path.empty()) return;
    json m;
    m["manifest_version"] = kManifestVersion;
    m["subcommand"] = subcommand_;
    json cfg = ConfigJson::options_json(&app_, true);
    cfg.erase("config");
    if (cfg.contains(subcommand_)) cfg[subcommand_].erase("manifest");
    m["config"] = cfg;
    json outs = json::object();
    for (const auto& o : record_.outputs) {
      if (o != "-") outs[o] = "fnv1a64:" + hex64(fnv1a_file(o));
    }
    m["outputs"] = outs;
    m["stats"] = record_.stats;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
    out << m.dump(2) << '\n';
  }

  void manifest_option(CLI::App* s) {
    s->add_option("--manifest", manifest_path_, "Run manifest path (default: <output>.manifest.json)")
        ->configurable(false);
  }

  GoldCorpus load_gold(const std::string& path, bool strip) {
    GoldCorpus c = read_gold_file(path);
    return strip ? strip_punctuation(c) : c;
  }

  static void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
    out << text;
  }

  void add_train() {
    CLI::App* s = sub("train", "Train a baseline segmenter on a gold corpus");
    auto* o = &train_opts_;
    s->add_option("--gold", o->gold, "Gold corpus (space-separated words)")->required()->check(CLI::ExistingFile);
    s->add_option("--dev", o->dev, "Dev corpus for epoch selection")->check(CLI::ExistingFile);
    s->add_option("--model-out", o->model_out, "Model file to write")->required();
    s->add_flag("--strip-punctuation", o->strip, "Drop punctuation-only words from gold and dev");
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "train";
      action_ = [this, o] {
        const GoldCorpus gold = load_gold(o->gold, o->strip);
        GoldCorpus dev;
        TrainConfig cfg = train_config(TrainMode::Baseline);
        if (!o->dev.empty()) {
          dev = load_gold(o->dev, o->strip);
          cfg.dev = &dev;
        }
        TrainLog log;
        const CrfModel m = train_baseline(gold, cfg, &log);
        m.save_file(o->model_out);
        output(o->model_out);
        record_.stats["sentences"] = gold.size();
        record_.stats["features"] = m.num_features();
        record_.stats["selected_epoch"] = log.selected_epoch;
      };
    });
  }

  void add_mine() {
    CLI::App* s = sub("mine", "Detect pauses in alignments and score them with a model");
    auto* o = &mine_opts_;
    s->add_option("--model", o->model, "Baseline model")->required()->check(CLI::ExistingFile);
    s->add_option("--alignments", o->alignments, "Alignment files (JSON, JSON lines or TextGrid)")
        ->required()
        ->check(CLI::ExistingFile);
    s->add_option("--frame-offset-ms", o->frame_offset_ms, "Frame offset for TextGrid input")
        ->check(CLI::PositiveNumber);
    s->add_option("--out", o->out, "Scored pauses, one JSON object per line")->required();
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "mine";
      action_ = [this, o] {
        const CrfModel model = CrfModel::load_file(o->model);
        TextGridOptions tg;
        tg.tier_name = g_.tier_name;
        tg.frame_offset_ms = o->frame_offset_ms;
        std::vector<MinedSentence> mined;
        std::int64_t pauses = 0;
        for (const auto& path : o->alignments) {
          for (const CharAlignment& a : load_alignments(path, tg)) {
            MinedSentence m = mine_sentence(a, g_.min_pause_ms);
            m.pauses = score_pauses(model, m.chars, std::move(m.pauses));
            pauses += static_cast<std::int64_t>(m.pauses.size());
            mined.push_back(std::move(m));
          }
        }
        write_mined_file(o->out, mined);
        output(o->out);
        record_.stats["sentences"] = mined.size();
        record_.stats["pauses"] = pauses;
      };
    });
  }

  void add_filter() {
    CLI::App* s = sub("filter", "Keep pauses at or above the threshold and write a partial corpus");
    auto* o = &filter_opts_;
    s->add_option("--mined", o->mined, "Scored pauses from 'mine'")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o->out, "Partial corpus ('|' marks boundaries)")->required();
    s->add_option("--mined-out", o->mined_out, "Also write the kept pauses as JSON lines");
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "filter";
      action_ = [this, o] {
        std::vector<MinedSentence> mined = read_mined_file(o->mined);
        std::vector<PartialSentence> partial;
        std::int64_t before = 0, kept = 0, with_boundary = 0;
        for (auto& m : mined) {
          before += static_cast<std::int64_t>(m.pauses.size());
          m.pauses = filter_pauses(m.pauses, g_.threshold);
          kept += static_cast<std::int64_t>(m.pauses.size());
          partial.push_back(to_partial(m));
          with_boundary += !partial.back().boundaries.empty();
        }
        write_partial_file(o->out, partial);
        output(o->out);
        if (!o->mined_out.empty()) {
          write_mined_file(o->mined_out, mined);
          output(o->mined_out);
        }
        record_.stats["sentences"] = partial.size();
        record_.stats["sentences_with_boundaries"] = with_boundary;
        record_.stats["pauses_in"] = before;
        record_.stats["pauses_kept"] = kept;
      };
    });
  }

  void add_complete() {
    CLI::App* s = sub("complete", "Complete partial annotations with constrained Viterbi");
    auto* o = &complete_opts_;
    s->add_option("--model", o->model, "Model")->required()->check(CLI::ExistingFile);
    s->add_option("--partial", o->partial, "Partial corpus")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o->out, "Completed gold corpus")->required();
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "complete";
      action_ = [this, o] {
        const CrfModel model = CrfModel::load_file(o->model);
        const auto partial = read_partial_file(o->partial);
        GoldCorpus out;
        std::int64_t skipped = 0;
        for (const auto& p : partial) {
          try {
            out.push_back(complete_annotation(model, p));
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoLegalPath) throw;
            ++skipped;
          }
        }
        write_gold_file(o->out, out);
        output(o->out);
        record_.stats["sentences"] = out.size();
        record_.stats["skipped"] = skipped;
      };
    });
  }

  struct PipelineOpts {
    std::string source, target, dev, model_out, baseline_out, completed_out;
    bool strip = false;
    bool all_sentences = false;
  };

  void pipeline_options(CLI::App* s, PipelineOpts* o) {
    s->add_option("--source", o->source, "Source-domain gold corpus")->required()->check(CLI::ExistingFile);
    s->add_option("--target", o->target, "Target-domain partial corpus")->required()->check(CLI::ExistingFile);
    s->add_option("--dev", o->dev, "Target-domain dev corpus for epoch selection")->check(CLI::ExistingFile);
    s->add_option("--model-out", o->model_out, "Final model")->required();
    s->add_option("--baseline-out", o->baseline_out, "Also write the baseline model");
    s->add_flag("--strip-punctuation", o->strip, "Drop punctuation-only words from source and dev");
    manifest_option(s);
  }

  void finish_pipeline(const std::string& name, const PipelineOpts* o, const PipelineResult& r) {
    r.model.save_file(o->model_out);
    output(o->model_out);
    if (!o->baseline_out.empty()) {
      r.baseline.save_file(o->baseline_out);
      output(o->baseline_out);
    }
    if (!o->completed_out.empty()) {
      write_gold_file(o->completed_out, r.completed);
      output(o->completed_out);
    }
    record_.stats["target_used"] = r.target_used;
    record_.stats["target_dropped"] = r.target_dropped;
    record_.stats["target_skipped"] = r.target_skipped;
    record_.stats["selected_epoch"] = r.final_log.selected_epoch;
    record_.stats["mode"] = name;
  }

  void add_ctt(const std::string& name, const std::string& help, TrainMode mode) {
    CLI::App* s = sub(name, help);
    auto* o = &pipeline_opts_[name];
    pipeline_options(s, o);
    s->add_option("--completed-out", o->completed_out, "Also write the completed target corpus");
    if (mode == TrainMode::SelfTraining) {
      s->add_flag("--all-sentences", o->all_sentences, "Label every target sentence, not only those with boundaries");
    }
    s->callback([this, o, name, mode] {
      subcommand_ = name;
      action_ = [this, o, name, mode] {
        const GoldCorpus source = load_gold(o->source, o->strip);
        const auto target = read_partial_file(o->target);
        TrainConfig cfg = train_config(mode);
        cfg.self_train_all_sentences = o->all_sentences;
        GoldCorpus dev;
        if (!o->dev.empty()) {
          dev = load_gold(o->dev, o->strip);
          cfg.dev = &dev;
        }
        finish_pipeline(std::string(mode_name(mode)), o, run_ctt(source, target, cfg));
      };
    });
  }

  void add_partialcrf() {
    CLI::App* s = sub("partialcrf", "Train with the partial-annotation loss on target boundaries");
    auto* o = &pipeline_opts_["partialcrf"];
    pipeline_options(s, o);
    s->callback([this, o] {
      subcommand_ = "partialcrf";
      action_ = [this, o] {
        const GoldCorpus source = load_gold(o->source, o->strip);
        const auto target = read_partial_file(o->target);
        TrainConfig cfg = train_config(TrainMode::PartialCrf);
        GoldCorpus dev;
        if (!o->dev.empty()) {
          dev = load_gold(o->dev, o->strip);
          cfg.dev = &dev;
        }
        finish_pipeline("partial_crf", o, run_partial_crf(source, target, cfg));
      };
    });
  }

  void add_segment() {
    CLI::App* s = sub("segment", "Segment raw text, one sentence per line");
    auto* o = &segment_opts_;
    s->add_option("--model", o->model, "Model")->required()->check(CLI::ExistingFile);
    s->add_option("--input", o->input, "Raw text")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o->out, "Segmented text ('-' for standard output)");
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "segment";
      action_ = [this, o] {
        const CrfModel model = CrfModel::load_file(o->model);
        const auto raw = read_raw_file(o->input);
        const GoldCorpus out = segment_all(model, raw, workers());
        std::ostringstream text;
        write_gold(text, out);
        write_text(o->out, text.str());
        output(o->out);
        record_.stats["sentences"] = out.size();
        record_.stats["words"] = corpus_stats(out).words;
      };
    });
  }

  void add_eval() {
    CLI::App* s = sub("eval", "Word precision, recall and F1 against a gold corpus");
    auto* o = &eval_opts_;
    s->add_option("--gold", o->gold, "Gold corpus")->required()->check(CLI::ExistingFile);
    s->add_option("--pred", o->pred, "Predicted segmentation")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o->out, "Report ('-' for standard output)");
    s->add_flag("--strip-punctuation", o->strip, "Drop punctuation-only words from both sides");
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "eval";
      action_ = [this, o] {
        const PrfScore r = prf(load_gold(o->gold, o->strip), load_gold(o->pred, o->strip));
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "precision\t%.6f\nrecall\t%.6f\nf1\t%.6f\ngold_words\t%lld\npredicted_words\t%lld\n"
                      "correct_words\t%lld\n",
                      r.precision, r.recall, r.f1, static_cast<long long>(r.gold_words),
                      static_cast<long long>(r.predicted_words), static_cast<long long>(r.correct_words));
        write_text(o->out, buf);
        output(o->out);
        record_.stats["precision"] = r.precision;
        record_.stats["recall"] = r.recall;
        record_.stats["f1"] = r.f1;
      };
    });
  }

  void add_stats() {
    CLI::App* s = sub("stats", "Pause counts by boundary probability and duration bins");
    auto* o = &stats_opts_;
    s->add_option("--mined", o->mined, "Scored pauses")->required()->check(CLI::ExistingFile);
    s->add_option("--gold", o->gold, "Gold segmentation of the same sentences, for accuracy")
        ->check(CLI::ExistingFile);
    s->add_option("--out", o->out, "Report ('-' for standard output)");
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "stats";
      action_ = [this, o] {
        const auto mined = read_mined_file(o->mined);
        GoldCorpus gold;
        if (!o->gold.empty()) gold = read_gold_file(o->gold);
        const PauseStats st = pause_statistics(mined, o->gold.empty() ? nullptr : &gold);
        std::ostringstream text;
        write_pause_stats(text, st);
        write_text(o->out, text.str());
        output(o->out);
        record_.stats["pauses"] = st.total;
        record_.stats["below_min_duration"] = st.below_min_duration;
      };
    });
  }

  void add_disagree() {
    CLI::App* s = sub("disagree", "Review file of sentences two systems segment differently");
    auto* o = &disagree_opts_;
    s->add_option("--pred-a", o->a, "First system output")->required()->check(CLI::ExistingFile);
    s->add_option("--pred-b", o->b, "Second system output")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o->out, "Review TSV ('-' for standard output)");
    manifest_option(s);
    s->callback([this, o] {
      subcommand_ = "disagree";
      action_ = [this, o] {
        const auto a = read_gold_file(o->a), b = read_gold_file(o->b);
        const auto rows = build_review(a, b, g_.seed);
        std::ostringstream text;
        write_review_tsv(text, rows);
        write_text(o->out, text.str());
        output(o->out);
        record_.stats["sentences"] = a.size();
        record_.stats["disagreements"] = rows.size();
      };
    });
  }

  struct TrainOpts {
    std::string gold, dev, model_out;
    bool strip = false;
  };
  struct MineOpts {
    std::string model, out;
    std::vector<std::string> alignments;
    double frame_offset_ms = 10.0;
  };
  struct FilterOpts {
    std::string mined, out, mined_out;
  };
  struct CompleteOpts {
    std::string model, partial, out;
  };
  struct SegmentOpts {
    std::string model, input, out = "-";
  };
  struct EvalOpts {
    std::string gold, pred, out = "-";
    bool strip = false;
  };
  struct StatsOpts {
    std::string mined, gold, out = "-";
  };
  struct DisagreeOpts {
    std::string a, b, out = "-";
  };

  CLI::App app_;
  Globals g_;
  TrainOpts train_opts_;
  MineOpts mine_opts_;
  FilterOpts filter_opts_;
  CompleteOpts complete_opts_;
  std::map<std::string, PipelineOpts> pipeline_opts_;
  SegmentOpts segment_opts_;
  EvalOpts eval_opts_;
  StatsOpts stats_opts_;
  DisagreeOpts disagree_opts_;
  std::string manifest_path_;
  std::string subcommand_;
  std::function<void()> action_;
  RunRecord record_;
};

}  // namespace

int main(int argc, char** argv) {
  Tool tool;
  return tool.run(argc, argv);
}
