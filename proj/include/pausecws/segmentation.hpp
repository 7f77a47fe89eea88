#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pausecws/tagset.hpp"
#include "pausecws/utf8.hpp"

namespace pausecws {

// Half-open character range [begin, end).
struct Span {
  int begin = 0;
  int end = 0;

  int size() const noexcept { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

// A character sentence together with a word partition of it.
class SegmentedSentence {
 public:
  SegmentedSentence() = default;
  // Throws Error(InvalidArgument) unless spans partition [0, chars.size()).
  SegmentedSentence(Chars chars, std::vector<Span> spans);

  static SegmentedSentence from_words(const std::vector<std::string>& words);
  // Parses a space-separated line of words.
  static SegmentedSentence from_line(std::string_view line);

  const Chars& chars() const noexcept { return chars_; }
  const std::vector<Span>& spans() const noexcept { return spans_; }
  int size() const noexcept { return static_cast<int>(chars_.size()); }
  int word_count() const noexcept { return static_cast<int>(spans_.size()); }

  std::string word(int k) const;
  std::vector<std::string> words() const;
  std::string to_line() const;

  // Junction i (between char i and i+1) is a word boundary.
  bool boundary_after(int i) const;
  std::vector<int> boundaries() const;

  friend bool operator==(const SegmentedSentence&, const SegmentedSentence&) = default;

 private:
  Chars chars_;
  std::vector<Span> spans_;
};

// BMES decoding. Throws Error(IllegalTagSequence) or Error(LengthMismatch).
SegmentedSentence labels_to_words(const TagSeq& tags, const Chars& chars);
TagSeq words_to_labels(const SegmentedSentence& sentence);

}  // namespace pausecws
