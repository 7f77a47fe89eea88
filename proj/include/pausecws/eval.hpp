#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pausecws/segmentation.hpp"

namespace pausecws {

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t gold_words = 0;
  std::int64_t predicted_words = 0;
  std::int64_t correct_words = 0;

  static PrfScore from_counts(std::int64_t gold, std::int64_t predicted, std::int64_t correct);
};

// Micro-averaged word P/R/F1 from exact span matches. Throws
// Error(SentenceMismatch) when the two sides disagree on sentence count or on
// the characters of any sentence.
PrfScore prf(const std::vector<SegmentedSentence>& gold, const std::vector<SegmentedSentence>& pred);

std::int64_t count_matching_spans(const SegmentedSentence& a, const SegmentedSentence& b);

struct CorpusStats {
  std::int64_t sentences = 0;
  std::int64_t words = 0;
  std::int64_t characters = 0;
};

CorpusStats corpus_stats(const std::vector<SegmentedSentence>& corpus);

// Fraction of predicted words that are a single character.
double single_char_word_rate(const std::vector<SegmentedSentence>& corpus);

// Indices of sentences segmented differently by the two systems.
std::vector<int> select_disagreements(const std::vector<SegmentedSentence>& a,
                                      const std::vector<SegmentedSentence>& b);

struct ReviewRow {
  int sentence_id = 0;
  std::string output_1;
  std::string output_2;
  bool swapped = false;  // output_1 came from system b
};

// One row per disagreement. Words not shared with the other output carry a
// '*' suffix; which system appears first is drawn per row from the seed.
std::vector<ReviewRow> build_review(const std::vector<SegmentedSentence>& a,
                                    const std::vector<SegmentedSentence>& b, std::uint64_t seed);
void write_review_tsv(std::ostream& out, const std::vector<ReviewRow>& rows);

}  // namespace pausecws
