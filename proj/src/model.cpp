#include "pausecws/model.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

constexpr std::string_view kMagic = "pausecws-crf-model";
constexpr int kFormatVersion = 1;

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s, int line) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": dangling escape");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad escape");
    }
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of model file");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }
  int line_no() const noexcept { return line_no_; }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, "model line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

double parse_weight(const std::string& s, const LineReader& r) {
  char* end = nullptr;
  const double w = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(w)) r.fail("bad weight '" + s + "'");
  return w;
}

Label parse_label(const std::string& s, const LineReader& r) {
  if (s.size() != 1) r.fail("bad label '" + s + "'");
  try {
    return label_from_char(s[0]);
  } catch (const Error&) {
    r.fail("bad label '" + s + "'");
  }
}

}  // namespace

CrfModel::CrfModel(FeatureTemplateSet templates, FeatureVocabulary vocab)
    : templates_(std::move(templates)), vocab_(std::move(vocab)) {
  if (vocab_.num_templates() != static_cast<int>(templates_.size())) {
    throw Error(ErrorKind::InvalidArgument, "vocabulary and template set disagree on template count");
  }
  vocab_.freeze();
  init_structure();
}

void CrfModel::init_structure() {
  weights_.assign(transitions_offset() + 24, 0.0);
  const auto& t = legal_transitions();
  for (Label a : kAllLabels) {
    for (Label b : kAllLabels) {
      if (!t.allowed(a, b)) weights_[transition_index(a, b)] = kNegInf;
    }
    if (!t.can_start(a)) weights_[start_index(a)] = kNegInf;
    if (!t.can_end(a)) weights_[end_index(a)] = kNegInf;
  }
}

CrfModel CrfModel::for_sentences(const std::vector<const Chars*>& sentences, FeatureTemplateSet templates) {
  FeatureVocabulary vocab(static_cast<int>(templates.size()));
  for (const Chars* s : sentences) add_sentence_features(vocab, *s, templates);
  return CrfModel(std::move(templates), std::move(vocab));
}

void CrfModel::set_feature_weight(const std::string& feature, Label l, double w) {
  if (!vocab_.contains(feature)) throw Error(ErrorKind::InvalidArgument, "unknown feature " + feature);
  emission(vocab_.lookup(feature, 0), l) = w;
}

EncodedSentence CrfModel::encode(const Chars& sentence) const {
  return pausecws::encode(sentence, templates_, vocab_);
}

std::vector<LabelRow> CrfModel::emission_scores(const EncodedSentence& enc) const {
  std::vector<LabelRow> out(enc.length, LabelRow{});
  for (int i = 0; i < enc.length; ++i) {
    const std::int32_t* ids = enc.row(i);
    for (int t = 0; t < enc.num_templates; ++t) {
      const double* w = weights_.data() + static_cast<std::size_t>(ids[t]) * kNumLabels;
      for (int l = 0; l < kNumLabels; ++l) out[i][l] += w[l];
    }
  }
  return out;
}

std::vector<LabelRow> CrfModel::emission_scores(const Chars& sentence) const {
  return emission_scores(encode(sentence));
}

Potentials CrfModel::potentials(const EncodedSentence& enc) const {
  Potentials pot;
  pot.emissions = emission_scores(enc);
  for (Label a : kAllLabels) {
    for (Label b : kAllLabels) pot.transitions[index_of(a)][index_of(b)] = transition(a, b);
    pot.start[index_of(a)] = start(a);
    pot.end[index_of(a)] = end(a);
  }
  return pot;
}

Potentials CrfModel::potentials(const Chars& sentence) const { return potentials(encode(sentence)); }

bool CrfModel::well_formed() const noexcept {
  const auto& t = legal_transitions();
  for (std::size_t i = 0; i < transitions_offset(); ++i) {
    if (!std::isfinite(weights_[i])) return false;
  }
  for (Label a : kAllLabels) {
    for (Label b : kAllLabels) {
      const double w = weights_[transition_index(a, b)];
      if (t.allowed(a, b) ? !std::isfinite(w) : w != kNegInf) return false;
    }
    const double s = weights_[start_index(a)];
    const double e = weights_[end_index(a)];
    if (t.can_start(a) ? !std::isfinite(s) : s != kNegInf) return false;
    if (t.can_end(a) ? !std::isfinite(e) : e != kNegInf) return false;
  }
  return true;
}

void CrfModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "labels B M E S\n";
  out << "templates " << templates_.size() << '\n';
  for (const auto& t : templates_) {
    out << "template " << t.name;
    for (int o : t.offsets) out << ' ' << o;
    out << '\n';
  }
  const int observed = vocab_.size() - vocab_.num_templates();
  out << "features " << observed << '\n';
  for (std::int32_t id = vocab_.num_templates(); id < vocab_.size(); ++id) {
    out << vocab_.template_of(id) << '\t' << escape(vocab_.name(id)) << '\n';
  }
  const auto& t = legal_transitions();
  out << "weights\n";
  for (Label a : kAllLabels) {
    if (t.can_start(a)) out << "start " << label_char(a) << ' ' << format_weight(start(a)) << '\n';
  }
  for (Label a : kAllLabels) {
    if (t.can_end(a)) out << "end " << label_char(a) << ' ' << format_weight(end(a)) << '\n';
  }
  for (Label a : kAllLabels) {
    for (Label b : kAllLabels) {
      if (t.allowed(a, b)) {
        out << "trans " << label_char(a) << ' ' << label_char(b) << ' ' << format_weight(transition(a, b)) << '\n';
      }
    }
  }
  for (std::int32_t id = 0; id < vocab_.size(); ++id) {
    for (Label l : kAllLabels) {
      out << "emit " << id << ' ' << label_char(l) << ' ' << format_weight(emission(id, l)) << '\n';
    }
  }
  out << "end-of-model\n";
}

CrfModel CrfModel::load(std::istream& in) {
  LineReader r(in);
  auto fields = [](const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> f;
    for (std::string tok; ss >> tok;) f.push_back(tok);
    return f;
  };
  auto to_int = [&r](const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') r.fail("bad integer '" + s + "'");
    return static_cast<int>(v);
  };

  auto header = fields(r.next());
  if (header.size() != 2 || header[0] != kMagic) r.fail("not a pausecws model");
  if (to_int(header[1]) != kFormatVersion) r.fail("unsupported format version " + header[1]);
  if (r.next() != "labels B M E S") r.fail("unexpected label set");

  auto tcount = fields(r.next());
  if (tcount.size() != 2 || tcount[0] != "templates") r.fail("expected template count");
  FeatureTemplateSet templates;
  for (int k = to_int(tcount[1]); k > 0; --k) {
    auto f = fields(r.next());
    if (f.size() < 3 || f[0] != "template") r.fail("bad template line");
    FeatureTemplate t{f[1], {}};
    for (std::size_t j = 2; j < f.size(); ++j) t.offsets.push_back(to_int(f[j]));
    templates.push_back(std::move(t));
  }

  auto fcount = fields(r.next());
  if (fcount.size() != 2 || fcount[0] != "features") r.fail("expected feature count");
  FeatureVocabulary vocab(static_cast<int>(templates.size()));
  for (int k = to_int(fcount[1]); k > 0; --k) {
    const std::string line = r.next();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) r.fail("bad feature line");
    const int tmpl = to_int(line.substr(0, tab));
    if (tmpl < 0 || tmpl >= static_cast<int>(templates.size())) r.fail("bad template index");
    const std::string name = unescape(std::string_view(line).substr(tab + 1), r.line_no());
    const auto expected = vocab.size();
    if (vocab.add(name, tmpl) != expected) r.fail("duplicate feature");
  }

  CrfModel model(std::move(templates), std::move(vocab));
  if (r.next() != "weights") r.fail("expected weights section");
  const auto& t = legal_transitions();
  for (;;) {
    auto f = fields(r.next());
    if (f.size() == 1 && f[0] == "end-of-model") break;
    if (f.size() == 3 && f[0] == "start") {
      const Label l = parse_label(f[1], r);
      if (!t.can_start(l)) r.fail("weight for an illegal start");
      model.start(l) = parse_weight(f[2], r);
    } else if (f.size() == 3 && f[0] == "end") {
      const Label l = parse_label(f[1], r);
      if (!t.can_end(l)) r.fail("weight for an illegal end");
      model.end(l) = parse_weight(f[2], r);
    } else if (f.size() == 4 && f[0] == "trans") {
      const Label a = parse_label(f[1], r);
      const Label b = parse_label(f[2], r);
      if (!t.allowed(a, b)) r.fail("weight for an illegal transition");
      model.transition(a, b) = parse_weight(f[3], r);
    } else if (f.size() == 4 && f[0] == "emit") {
      const int id = to_int(f[1]);
      if (id < 0 || id >= model.num_features()) r.fail("feature id out of range");
      model.emission(id, parse_label(f[2], r)) = parse_weight(f[3], r);
    } else {
      r.fail("unrecognised weight line");
    }
  }
  return model;
}

void CrfModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  save(out);
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path);
}

CrfModel CrfModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  return load(in);
}

bool operator==(const CrfModel& a, const CrfModel& b) {
  if (a.templates_ != b.templates_ || a.vocab_.size() != b.vocab_.size() ||
      a.vocab_.num_templates() != b.vocab_.num_templates() || a.weights_.size() != b.weights_.size()) {
    return false;
  }
  for (std::int32_t id = a.vocab_.num_templates(); id < a.vocab_.size(); ++id) {
    if (a.vocab_.name(id) != b.vocab_.name(id) || a.vocab_.template_of(id) != b.vocab_.template_of(id)) return false;
  }
  for (std::size_t i = 0; i < a.weights_.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.weights_[i]) != std::bit_cast<std::uint64_t>(b.weights_[i])) return false;
  }
  return true;
}

double score_sequence(const Chars& sentence, const TagSeq& tags, const CrfModel& model) {
  if (tags.size() != sentence.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(tags.size()) + " tags for " +
                                               std::to_string(sentence.size()) + " characters");
  }
  return score_sequence(model.potentials(sentence), tags);
}

double log_partition(const Chars& sentence, const CrfModel& model, const ConstraintMask* mask) {
  return log_partition(model.potentials(sentence), mask);
}

BigramMarginals bigram_marginals(const Chars& sentence, const CrfModel& model) {
  return bigram_marginals(model.potentials(sentence));
}

double boundary_probability(const Chars& sentence, const CrfModel& model, int junction) {
  if (junction < 0 || junction + 1 >= static_cast<int>(sentence.size())) {
    throw Error(ErrorKind::IndexOutOfRange, "junction " + std::to_string(junction));
  }
  return bigram_marginals(sentence, model).boundary_probability(junction);
}

TagSeq viterbi(const Chars& sentence, const CrfModel& model, const ConstraintMask* mask) {
  return viterbi(model.potentials(sentence), mask);
}

}  // namespace pausecws
