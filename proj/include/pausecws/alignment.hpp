#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pausecws/utf8.hpp"

namespace pausecws {

struct AlignedChar {
  std::string text;
  std::int64_t begin_frame = 0;
  std::int64_t end_frame = 0;

  friend bool operator==(const AlignedChar&, const AlignedChar&) = default;
};

// Character-level forced alignment of one utterance.
struct CharAlignment {
  std::string utterance_id;
  std::vector<AlignedChar> chars;
  double frame_offset_ms = 10.0;

  int size() const noexcept { return static_cast<int>(chars.size()); }
  Chars characters() const;
  // Throws Error(NonMonotoneFrames) if begin frames decrease and
  // Error(ParseError) on end < begin or a non-positive frame offset.
  void validate() const;

  friend bool operator==(const CharAlignment&, const CharAlignment&) = default;
};

struct Pause {
  int junction = 0;  // between characters junction and junction + 1
  double duration_ms = 0.0;
  std::optional<double> probability;

  friend bool operator==(const Pause&, const Pause&) = default;
};

// JSON alignment documents: a single utterance object, an array of them, or
// one object per line. Errors carry line and column.
std::vector<CharAlignment> parse_alignment_json(std::string_view text);
std::string alignment_to_json(const CharAlignment& a);

struct TextGridOptions {
  std::string tier_name = "characters";
  double frame_offset_ms = 10.0;
  std::string utterance_id;
};

// Long-format TextGrid. Each non-empty interval of the named interval tier is
// one character; empty intervals are silence and only widen the gap. Times
// round to the nearest frame.
CharAlignment parse_textgrid(std::string_view text, const TextGridOptions& options = {});

// Dispatches on the file extension (.TextGrid / .textgrid vs anything else).
std::vector<CharAlignment> load_alignments(const std::string& path, const TextGridOptions& options = {});

// Element i = max(0, (begin[i+1] - end[i]) * frame_offset_ms).
// Throws Error(SentenceTooShort) for fewer than 2 characters.
std::vector<double> pause_durations(const CharAlignment& a);

inline constexpr double kDefaultMinPauseMs = 10.0;

// Pauses of at least min_pause_ms; probability unset. Alignments with fewer
// than two characters have no junctions and yield nothing.
std::vector<Pause> detect_pauses(const CharAlignment& a, double min_pause_ms = kDefaultMinPauseMs);

}  // namespace pausecws
