#include "pausecws/mining.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "json.hpp"
#include "pausecws/error.hpp"

namespace pausecws {

void PartialSentence::validate() const {
  const int n = static_cast<int>(chars.size());
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    const int b = boundaries[k];
    if (b < 0 || b > n - 2) {
      throw Error(ErrorKind::IndexOutOfRange, "boundary " + std::to_string(b) + " outside [0, " +
                                                  std::to_string(n - 2) + "]");
    }
    if (k > 0 && b <= boundaries[k - 1]) {
      throw Error(ErrorKind::InvalidArgument, "boundaries must be sorted and unique");
    }
  }
}

PartialSentence parse_partial_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  PartialSentence p;
  const Chars raw = split_utf8(line);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "\\") {
      if (i + 1 == raw.size() || (raw[i + 1] != "|" && raw[i + 1] != "\\")) {
        throw Error(ErrorKind::ParseError, "bad escape in partial annotation line");
      }
      p.chars.push_back(raw[++i]);
    } else if (raw[i] == "|") {
      // Marks at the sentence edges carry no information.
      const int j = static_cast<int>(p.chars.size()) - 1;
      if (j >= 0 && (p.boundaries.empty() || p.boundaries.back() != j)) p.boundaries.push_back(j);
    } else {
      p.chars.push_back(raw[i]);
    }
  }
  const int n = static_cast<int>(p.chars.size());
  std::erase_if(p.boundaries, [n](int b) { return b > n - 2; });
  return p;
}

std::string format_partial_line(const PartialSentence& p) {
  std::string out;
  std::size_t next = 0;
  for (int i = 0; i < static_cast<int>(p.chars.size()); ++i) {
    const std::string& c = p.chars[i];
    if (c == "|" || c == "\\") out += '\\';
    out += c;
    if (next < p.boundaries.size() && p.boundaries[next] == i) {
      out += '|';
      ++next;
    }
  }
  return out;
}

MinedSentence mine_sentence(const CharAlignment& a, double min_pause_ms) {
  return {a.utterance_id, a.characters(), detect_pauses(a, min_pause_ms)};
}

std::string mined_to_json_line(const MinedSentence& m) {
  nlohmann::ordered_json j;
  j["utterance_id"] = m.utterance_id;
  j["text"] = join_chars(m.chars);
  j["pauses"] = nlohmann::ordered_json::array();
  for (const Pause& p : m.pauses) {
    nlohmann::ordered_json e;
    e["junction"] = p.junction;
    e["duration_ms"] = p.duration_ms;
    if (p.probability) e["probability"] = *p.probability;
    j["pauses"].push_back(std::move(e));
  }
  return j.dump();
}

MinedSentence mined_from_json_line(std::string_view line) {
  using json = nlohmann::json;
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::ParseError, "pause record is not a JSON object");
  MinedSentence m;
  try {
    m.utterance_id = j.value("utterance_id", std::string());
    m.chars = split_utf8(j.at("text").get<std::string>());
    for (const json& e : j.at("pauses")) {
      Pause p;
      p.junction = e.at("junction").get<int>();
      p.duration_ms = e.at("duration_ms").get<double>();
      if (auto it = e.find("probability"); it != e.end() && !it->is_null()) p.probability = it->get<double>();
      if (p.junction < 0 || p.junction + 1 >= static_cast<int>(m.chars.size())) {
        throw Error(ErrorKind::IndexOutOfRange, "pause junction " + std::to_string(p.junction));
      }
      m.pauses.push_back(p);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("pause record: ") + e.what());
  }
  return m;
}

std::vector<Pause> score_pauses(const CrfModel& model, const Chars& sentence, std::vector<Pause> pauses) {
  if (pauses.empty()) return pauses;
  const int n = static_cast<int>(sentence.size());
  for (const Pause& p : pauses) {
    if (p.junction < 0 || p.junction + 1 >= n) {
      throw Error(ErrorKind::IndexOutOfRange, "pause junction " + std::to_string(p.junction));
    }
  }
  const BigramMarginals m = bigram_marginals(sentence, model);
  for (Pause& p : pauses) p.probability = std::clamp(m.boundary_probability(p.junction), 0.0, 1.0);
  return pauses;
}

std::vector<Pause> filter_pauses(const std::vector<Pause>& pauses, double threshold) {
  std::vector<Pause> out;
  for (const Pause& p : pauses) {
    if (!p.probability) {
      throw Error(ErrorKind::UnscoredPause, "pause at junction " + std::to_string(p.junction) + " has no probability");
    }
    if (*p.probability >= threshold) out.push_back(p);
  }
  return out;
}

PartialSentence to_partial(const MinedSentence& m) {
  PartialSentence p{m.chars, {}};
  for (const Pause& q : m.pauses) p.boundaries.push_back(q.junction);
  std::sort(p.boundaries.begin(), p.boundaries.end());
  p.boundaries.erase(std::unique(p.boundaries.begin(), p.boundaries.end()), p.boundaries.end());
  return p;
}

ConstraintMask build_constraint_mask(const PartialSentence& p) {
  p.validate();
  std::vector<ConstraintMask::Row> rows(p.chars.size(), ConstraintMask::Row{true, true, true, true});
  for (int b : p.boundaries) {
    rows[b][index_of(Label::B)] = rows[b][index_of(Label::M)] = false;
    rows[b + 1][index_of(Label::M)] = rows[b + 1][index_of(Label::E)] = false;
  }
  return ConstraintMask(std::move(rows));
}

int probability_bin(double p) noexcept {
  if (p >= 1.0 - 1e-12) return 3;
  if (p >= 0.9) return 2;
  if (p >= 0.1) return 1;
  return 0;
}

int duration_bin(double ms) noexcept {
  if (ms < 10.0) return -1;
  if (ms < 50.0) return 0;
  if (ms < 150.0) return 1;
  if (ms < 500.0) return 2;
  return 3;
}

std::string_view probability_bin_label(int bin) {
  static constexpr std::string_view labels[] = {"[0.0,0.1)", "[0.1,0.9)", "[0.9,1.0)", "1.0"};
  return labels[bin];
}

std::string_view duration_bin_label(int bin) {
  static constexpr std::string_view labels[] = {"[10,50)", "[50,150)", "[150,500)", "[500,INF)"};
  return labels[bin];
}

PauseStats pause_statistics(const std::vector<MinedSentence>& mined, const std::vector<SegmentedSentence>* gold) {
  if (gold && gold->size() != mined.size()) {
    throw Error(ErrorKind::SentenceMismatch, std::to_string(gold->size()) + " gold sentences for " +
                                                 std::to_string(mined.size()) + " mined sentences");
  }
  PauseStats st;
  for (std::size_t s = 0; s < mined.size(); ++s) {
    const MinedSentence& m = mined[s];
    if (gold && (*gold)[s].chars() != m.chars) {
      throw Error(ErrorKind::SentenceMismatch, "gold sentence " + std::to_string(s) + " differs from mined text");
    }
    for (const Pause& p : m.pauses) {
      if (!p.probability) {
        throw Error(ErrorKind::UnscoredPause, "pause at junction " + std::to_string(p.junction) + " has no probability");
      }
      const int db = duration_bin(p.duration_ms);
      if (db < 0) {
        ++st.below_min_duration;
        continue;
      }
      const int pb = probability_bin(*p.probability);
      ++st.counts[pb][db];
      ++st.total;
      if (gold && (*gold)[s].boundary_after(p.junction)) ++st.correct[pb];
    }
  }
  std::array<double, kProbabilityBins> accuracy{};
  for (int pb = 0; pb < kProbabilityBins; ++pb) {
    std::int64_t row = 0;
    for (int db = 0; db < kDurationBins; ++db) row += st.counts[pb][db];
    st.overall_percent[pb] = st.total ? 100.0 * static_cast<double>(row) / static_cast<double>(st.total) : 0.0;
    for (int db = 0; db < kDurationBins; ++db) {
      st.internal_percent[pb][db] = row ? 100.0 * static_cast<double>(st.counts[pb][db]) / static_cast<double>(row) : 0.0;
    }
    accuracy[pb] = row ? 100.0 * static_cast<double>(st.correct[pb]) / static_cast<double>(row)
                       : std::numeric_limits<double>::quiet_NaN();
  }
  if (gold) st.accuracy = accuracy;
  return st;
}

void write_pause_stats(std::ostream& out, const PauseStats& st) {
  char buf[64];
  out << "probability\tpauses\toverall%";
  for (int db = 0; db < kDurationBins; ++db) out << '\t' << duration_bin_label(db);
  if (st.accuracy) out << "\taccuracy%";
  out << '\n';
  for (int pb = 0; pb < kProbabilityBins; ++pb) {
    std::int64_t row = 0;
    for (int db = 0; db < kDurationBins; ++db) row += st.counts[pb][db];
    std::snprintf(buf, sizeof buf, "%.1f", st.overall_percent[pb]);
    out << probability_bin_label(pb) << '\t' << row << '\t' << buf;
    for (int db = 0; db < kDurationBins; ++db) {
      std::snprintf(buf, sizeof buf, "%.1f", st.internal_percent[pb][db]);
      out << '\t' << st.counts[pb][db] << " (" << buf << "%)";
    }
    if (st.accuracy) {
      const double a = (*st.accuracy)[pb];
      if (std::isnan(a)) {
        out << "\t-";
      } else {
        std::snprintf(buf, sizeof buf, "%.1f", a);
        out << '\t' << buf;
      }
    }
    out << '\n';
  }
  out << "total\t" << st.total << "\t100.0\n";
  if (st.below_min_duration) out << "below 10ms (not binned)\t" << st.below_min_duration << '\n';
}

}  // namespace pausecws
