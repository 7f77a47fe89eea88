#include "pausecws/alignment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "pausecws/corpus_io.hpp"
#include "pausecws/error.hpp"

namespace pausecws {

namespace {

using json = nlohmann::json;

// 1-based line and column of a byte offset.
std::string location(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void fail_field(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

CharAlignment from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail_field(where, "utterance must be a JSON object");
  CharAlignment a;
  if (auto it = j.find("utterance_id"); it != j.end()) {
    if (!it->is_string()) fail_field(where, "\"utterance_id\" must be a string");
    a.utterance_id = it->get<std::string>();
  }
  if (auto it = j.find("frame_offset_ms"); it != j.end()) {
    if (!it->is_number()) fail_field(where, "\"frame_offset_ms\" must be a number");
    a.frame_offset_ms = it->get<double>();
  }
  auto chars = j.find("chars");
  if (chars == j.end() || !chars->is_array()) fail_field(where, "missing \"chars\" array");
  for (std::size_t k = 0; k < chars->size(); ++k) {
    const json& c = (*chars)[k];
    const std::string at = where + ", chars[" + std::to_string(k) + "]";
    if (!c.is_object()) fail_field(at, "entry must be an object");
    auto ct = c.find("c");
    auto cb = c.find("b");
    auto ce = c.find("e");
    if (ct == c.end() || !ct->is_string()) fail_field(at, "\"c\" must be a string");
    if (cb == c.end() || !cb->is_number_integer()) fail_field(at, "\"b\" must be an integer");
    if (ce == c.end() || !ce->is_number_integer()) fail_field(at, "\"e\" must be an integer");
    if (split_utf8(ct->get<std::string>()).size() != 1) fail_field(at, "\"c\" must hold exactly one character");
    a.chars.push_back({ct->get<std::string>(), cb->get<std::int64_t>(), ce->get<std::int64_t>()});
  }
  a.validate();
  return a;
}

std::vector<CharAlignment> from_document(const json& doc, const std::string& where) {
  std::vector<CharAlignment> out;
  if (doc.is_array()) {
    for (std::size_t k = 0; k < doc.size(); ++k) out.push_back(from_json(doc[k], where + ", utterance " + std::to_string(k)));
  } else {
    out.push_back(from_json(doc, where));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

// Value of a `key = value` line; quoted strings have Praat's doubled quotes undone.
std::string tg_value(std::string_view line, int line_no) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::ParseError, "TextGrid line " + std::to_string(line_no) + ": expected key = value");
  }
  std::string_view v = trim(line.substr(eq + 1));
  if (!v.empty() && v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') {
      throw Error(ErrorKind::ParseError, "TextGrid line " + std::to_string(line_no) + ": unterminated string");
    }
    std::string out;
    v = v.substr(1, v.size() - 2);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += v[i];
      if (v[i] == '"' && i + 1 < v.size() && v[i + 1] == '"') ++i;
    }
    return out;
  }
  return std::string(v);
}

double tg_number(std::string_view line, int line_no) {
  const std::string v = tg_value(line, line_no);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "TextGrid line " + std::to_string(line_no) + ": bad number '" + v + "'");
  }
}

struct TgInterval {
  double xmin = 0, xmax = 0;
  std::string text;
  int line = 0;
};

struct TgTier {
  std::string klass;
  std::string name;
  std::vector<TgInterval> intervals;
};

}  // namespace

Chars CharAlignment::characters() const {
  Chars out;
  out.reserve(chars.size());
  for (const auto& c : chars) out.push_back(c.text);
  return out;
}

void CharAlignment::validate() const {
  if (!(frame_offset_ms > 0.0) || !std::isfinite(frame_offset_ms)) {
    throw Error(ErrorKind::ParseError, "utterance '" + utterance_id + "': frame_offset_ms must be positive");
  }
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto& c = chars[i];
    if (c.begin_frame < 0 || c.end_frame < c.begin_frame) {
      throw Error(ErrorKind::ParseError, "utterance '" + utterance_id + "': character " + std::to_string(i) +
                                             " has an invalid frame span");
    }
    if (i > 0 && c.begin_frame < chars[i - 1].begin_frame) {
      throw Error(ErrorKind::NonMonotoneFrames, "utterance '" + utterance_id + "': begin frame decreases at character " +
                                                    std::to_string(i));
    }
  }
}

std::vector<CharAlignment> parse_alignment_json(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (!doc.is_discarded()) return from_document(doc, "alignment");

  std::vector<std::pair<int, std::string_view>> lines;
  std::size_t pos = 0;
  for (int line_no = 1; pos <= text.size(); ++line_no) {
    const std::size_t nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!trim(line).empty()) lines.emplace_back(line_no, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  if (lines.size() <= 1) {
    try {
      [[maybe_unused]] const json checked = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::ParseError, location(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
  }

  // One utterance object per line.
  std::vector<CharAlignment> out;
  for (const auto& [line_no, line] : lines) {
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded()) {
      try {
        [[maybe_unused]] const json checked = json::parse(line.begin(), line.end());
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ", column " +
                                               std::to_string(e.byte) + ": " + e.what());
      }
    }
    auto docs = from_document(j, "line " + std::to_string(line_no));
    out.insert(out.end(), docs.begin(), docs.end());
  }
  return out;
}

std::string alignment_to_json(const CharAlignment& a) {
  nlohmann::ordered_json j;
  j["utterance_id"] = a.utterance_id;
  j["frame_offset_ms"] = a.frame_offset_ms;
  j["chars"] = nlohmann::ordered_json::array();
  for (const auto& c : a.chars) {
    nlohmann::ordered_json e;
    e["c"] = c.text;
    e["b"] = c.begin_frame;
    e["e"] = c.end_frame;
    j["chars"].push_back(std::move(e));
  }
  return j.dump();
}

CharAlignment parse_textgrid(std::string_view text, const TextGridOptions& options) {
  if (!(options.frame_offset_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "frame offset must be positive");
  std::vector<TgTier> tiers;
  TgTier* tier = nullptr;
  TgInterval* interval = nullptr;
  bool saw_header = false;

  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line_no == 1 && starts_with(line, "\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) continue;

    if (starts_with(line, "Object class")) {
      if (tg_value(line, line_no) != "TextGrid") {
        throw Error(ErrorKind::ParseError, "TextGrid line " + std::to_string(line_no) + ": not a TextGrid object");
      }
      saw_header = true;
    } else if (starts_with(line, "item [") && !starts_with(line, "item []")) {
      tiers.emplace_back();
      tier = &tiers.back();
      interval = nullptr;
    } else if (tier && starts_with(line, "class")) {
      tier->klass = tg_value(line, line_no);
    } else if (tier && starts_with(line, "name")) {
      tier->name = tg_value(line, line_no);
    } else if (tier && starts_with(line, "intervals [")) {
      tier->intervals.emplace_back();
      interval = &tier->intervals.back();
      interval->line = line_no;
    } else if (interval && starts_with(line, "xmin")) {
      interval->xmin = tg_number(line, line_no);
    } else if (interval && starts_with(line, "xmax")) {
      interval->xmax = tg_number(line, line_no);
    } else if (interval && starts_with(line, "text")) {
      interval->text = tg_value(line, line_no);
    } else if (tier && (starts_with(line, "points [") || starts_with(line, "points:"))) {
      interval = nullptr;
    }
  }
  if (!saw_header) throw Error(ErrorKind::ParseError, "missing 'Object class = \"TextGrid\"' header");

  auto it = std::find_if(tiers.begin(), tiers.end(), [&](const TgTier& t) {
    return t.klass == "IntervalTier" && t.name == options.tier_name;
  });
  if (it == tiers.end()) {
    throw Error(ErrorKind::ParseError, "no interval tier named '" + options.tier_name + "'");
  }

  CharAlignment a;
  a.utterance_id = options.utterance_id;
  a.frame_offset_ms = options.frame_offset_ms;
  const double frames_per_second = 1000.0 / options.frame_offset_ms;
  for (const TgInterval& iv : it->intervals) {
    const std::string label(trim(iv.text));
    if (label.empty()) continue;
    if (split_utf8(label).size() != 1) {
      throw Error(ErrorKind::ParseError, "TextGrid line " + std::to_string(iv.line) +
                                             ": expected one character per interval, got '" + label + "'");
    }
    a.chars.push_back({label, std::llround(iv.xmin * frames_per_second), std::llround(iv.xmax * frames_per_second)});
  }
  a.validate();
  return a;
}

std::vector<CharAlignment> load_alignments(const std::string& path, const TextGridOptions& options) {
  const std::string text = read_text_file(path);
  std::filesystem::path p(path);
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".textgrid") {
    TextGridOptions opts = options;
    if (opts.utterance_id.empty()) opts.utterance_id = p.stem().string();
    return {parse_textgrid(text, opts)};
  }
  try {
    return parse_alignment_json(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.detail());
  }
}

std::vector<double> pause_durations(const CharAlignment& a) {
  if (a.size() < 2) throw Error(ErrorKind::SentenceTooShort, "pause durations need at least 2 characters");
  std::vector<double> out(a.size() - 1);
  for (int i = 0; i + 1 < a.size(); ++i) {
    const auto gap = a.chars[i + 1].begin_frame - a.chars[i].end_frame;
    out[i] = gap > 0 ? static_cast<double>(gap) * a.frame_offset_ms : 0.0;
  }
  return out;
}

std::vector<Pause> detect_pauses(const CharAlignment& a, double min_pause_ms) {
  if (!(min_pause_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "min_pause_ms must be positive");
  std::vector<Pause> out;
  if (a.size() < 2) return out;
  const auto d = pause_durations(a);
  for (int i = 0; i < static_cast<int>(d.size()); ++i) {
    if (d[i] >= min_pause_ms) out.push_back({i, d[i], std::nullopt});
  }
  return out;
}

}  // namespace pausecws
