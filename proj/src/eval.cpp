#include "pausecws/eval.hpp"

#include <ostream>
#include <random>
#include <string>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

void check_aligned(const std::vector<SegmentedSentence>& a, const std::vector<SegmentedSentence>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::SentenceMismatch,
                std::to_string(a.size()) + " sentences vs " + std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].chars() != b[i].chars()) {
      throw Error(ErrorKind::SentenceMismatch, "sentence " + std::to_string(i) + " has different characters");
    }
  }
}

std::string render_marked(const SegmentedSentence& s, const SegmentedSentence& other) {
  const auto& theirs = other.spans();
  std::string out;
  std::size_t j = 0;
  for (int k = 0; k < s.word_count(); ++k) {
    const Span span = s.spans()[k];
    while (j < theirs.size() && theirs[j].begin < span.begin) ++j;
    const bool shared = j < theirs.size() && theirs[j] == span;
    if (k) out += " / ";
    out += s.word(k);
    if (!shared) out += '*';
  }
  return out;
}

}  // namespace

PrfScore PrfScore::from_counts(std::int64_t gold, std::int64_t predicted, std::int64_t correct) {
  PrfScore s;
  s.gold_words = gold;
  s.predicted_words = predicted;
  s.correct_words = correct;
  s.precision = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
  s.recall = gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

std::int64_t count_matching_spans(const SegmentedSentence& a, const SegmentedSentence& b) {
  std::int64_t n = 0;
  std::size_t i = 0, j = 0;
  const auto& x = a.spans();
  const auto& y = b.spans();
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) {
      ++n;
      ++i;
      ++j;
    } else if (x[i].end < y[j].end) {
      ++i;
    } else if (x[i].end > y[j].end) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return n;
}

PrfScore prf(const std::vector<SegmentedSentence>& gold, const std::vector<SegmentedSentence>& pred) {
  check_aligned(gold, pred);
  std::int64_t g = 0, p = 0, c = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    g += gold[i].word_count();
    p += pred[i].word_count();
    c += count_matching_spans(gold[i], pred[i]);
  }
  return PrfScore::from_counts(g, p, c);
}

CorpusStats corpus_stats(const std::vector<SegmentedSentence>& corpus) {
  CorpusStats st;
  for (const auto& s : corpus) {
    ++st.sentences;
    st.words += s.word_count();
    st.characters += s.size();
  }
  return st;
}

double single_char_word_rate(const std::vector<SegmentedSentence>& corpus) {
  std::int64_t words = 0, singles = 0;
  for (const auto& s : corpus) {
    for (const Span& span : s.spans()) {
      ++words;
      if (span.size() == 1) ++singles;
    }
  }
  return words ? static_cast<double>(singles) / static_cast<double>(words) : 0.0;
}

std::vector<int> select_disagreements(const std::vector<SegmentedSentence>& a,
                                      const std::vector<SegmentedSentence>& b) {
  check_aligned(a, b);
  std::vector<int> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].spans() != b[i].spans()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<ReviewRow> build_review(const std::vector<SegmentedSentence>& a,
                                    const std::vector<SegmentedSentence>& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ReviewRow> rows;
  for (int i : select_disagreements(a, b)) {
    ReviewRow row;
    row.sentence_id = i;
    row.swapped = (rng() >> 63) != 0;
    row.output_1 = render_marked(row.swapped ? b[i] : a[i], row.swapped ? a[i] : b[i]);
    row.output_2 = render_marked(row.swapped ? a[i] : b[i], row.swapped ? b[i] : a[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_review_tsv(std::ostream& out, const std::vector<ReviewRow>& rows) {
  out << "sentence_id\toutput_1\toutput_2\n";
  for (const auto& r : rows) out << r.sentence_id << '\t' << r.output_1 << '\t' << r.output_2 << '\n';
}

}  // namespace pausecws
