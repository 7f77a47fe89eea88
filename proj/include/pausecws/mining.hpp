#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pausecws/alignment.hpp"
#include "pausecws/crf.hpp"
#include "pausecws/model.hpp"
#include "pausecws/segmentation.hpp"

namespace pausecws {

// A character sentence with the junctions known to be word boundaries.
struct PartialSentence {
  Chars chars;
  std::vector<int> boundaries;  // sorted, unique, within [0, n-2]

  void validate() const;  // throws Error(IndexOutOfRange) / Error(InvalidArgument)
  friend bool operator==(const PartialSentence&, const PartialSentence&) = default;
};

// One line of the partial-annotation format: '|' marks a boundary, "\|" and
// "\\" stand for literal characters.
PartialSentence parse_partial_line(std::string_view line);
std::string format_partial_line(const PartialSentence& p);

// An utterance with its detected pauses, the unit passed between mining steps.
struct MinedSentence {
  std::string utterance_id;
  Chars chars;
  std::vector<Pause> pauses;

  friend bool operator==(const MinedSentence&, const MinedSentence&) = default;
};

MinedSentence mine_sentence(const CharAlignment& a, double min_pause_ms = kDefaultMinPauseMs);

std::string mined_to_json_line(const MinedSentence& m);
MinedSentence mined_from_json_line(std::string_view line);

// Sets each pause's probability to the model's boundary probability at its
// junction. Throws Error(IndexOutOfRange).
std::vector<Pause> score_pauses(const CrfModel& model, const Chars& sentence, std::vector<Pause> pauses);

// Keeps pauses with probability >= threshold, in order. Throws
// Error(UnscoredPause).
std::vector<Pause> filter_pauses(const std::vector<Pause>& pauses, double threshold);

PartialSentence to_partial(const MinedSentence& m);

// Boundary at junction i restricts position i to {E, S} and i+1 to {B, S}.
// Throws Error(NoLegalPath) if the restrictions leave no legal sequence.
ConstraintMask build_constraint_mask(const PartialSentence& p);

inline constexpr int kProbabilityBins = 4;
inline constexpr int kDurationBins = 4;

// [0,0.1) [0.1,0.9) [0.9,1.0) {1.0}; values within 1e-12 of 1 count as 1.
int probability_bin(double p) noexcept;
// [10,50) [50,150) [150,500) [500,inf) ms; -1 below 10 ms.
int duration_bin(double ms) noexcept;

std::string_view probability_bin_label(int bin);
std::string_view duration_bin_label(int bin);

struct PauseStats {
  std::array<std::array<std::int64_t, kDurationBins>, kProbabilityBins> counts{};
  std::array<double, kProbabilityBins> overall_percent{};
  std::array<std::array<double, kDurationBins>, kProbabilityBins> internal_percent{};
  std::optional<std::array<double, kProbabilityBins>> accuracy;  // percent, NaN for empty bins
  std::array<std::int64_t, kProbabilityBins> correct{};
  std::int64_t total = 0;
  std::int64_t below_min_duration = 0;  // pauses shorter than 10 ms, not binned
};

// Throws Error(UnscoredPause); with gold, Error(SentenceMismatch) if the gold
// sentences do not line up with the mined ones.
PauseStats pause_statistics(const std::vector<MinedSentence>& mined,
                            const std::vector<SegmentedSentence>* gold = nullptr);

// Probability bin x duration bin table with counts and percentages.
void write_pause_stats(std::ostream& out, const PauseStats& stats);

}  // namespace pausecws
