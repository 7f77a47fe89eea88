#include "pausecws/segmentation.hpp"

#include <string>

#include "pausecws/error.hpp"

namespace pausecws {

SegmentedSentence::SegmentedSentence(Chars chars, std::vector<Span> spans)
    : chars_(std::move(chars)), spans_(std::move(spans)) {
  int cursor = 0;
  for (const Span& s : spans_) {
    if (s.begin != cursor || s.end <= s.begin) {
      throw Error(ErrorKind::InvalidArgument, "word spans must be non-empty and contiguous");
    }
    cursor = s.end;
  }
  if (cursor != size()) {
    throw Error(ErrorKind::InvalidArgument, "word spans must cover the sentence");
  }
}

SegmentedSentence SegmentedSentence::from_words(const std::vector<std::string>& words) {
  Chars chars;
  std::vector<Span> spans;
  for (const auto& w : words) {
    Chars wc = split_utf8(w);
    if (wc.empty()) continue;
    const int begin = static_cast<int>(chars.size());
    chars.insert(chars.end(), wc.begin(), wc.end());
    spans.push_back({begin, static_cast<int>(chars.size())});
  }
  return SegmentedSentence(std::move(chars), std::move(spans));
}

SegmentedSentence SegmentedSentence::from_line(std::string_view line) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) words.emplace_back(line.substr(pos, end - pos));
    pos = end;
  }
  return from_words(words);
}

std::string SegmentedSentence::word(int k) const {
  const Span& s = spans_.at(k);
  std::string w;
  for (int i = s.begin; i < s.end; ++i) w += chars_[i];
  return w;
}

std::vector<std::string> SegmentedSentence::words() const {
  std::vector<std::string> out;
  out.reserve(spans_.size());
  for (int k = 0; k < word_count(); ++k) out.push_back(word(k));
  return out;
}

std::string SegmentedSentence::to_line() const {
  std::string line;
  for (int k = 0; k < word_count(); ++k) {
    if (k) line += ' ';
    line += word(k);
  }
  return line;
}

bool SegmentedSentence::boundary_after(int i) const {
  if (i < 0 || i + 1 >= size()) {
    throw Error(ErrorKind::IndexOutOfRange, "junction " + std::to_string(i));
  }
  for (const Span& s : spans_) {
    if (s.end == i + 1) return true;
    if (s.end > i + 1) return false;
  }
  return false;
}

std::vector<int> SegmentedSentence::boundaries() const {
  std::vector<int> out;
  for (std::size_t k = 0; k + 1 < spans_.size(); ++k) out.push_back(spans_[k].end - 1);
  return out;
}

SegmentedSentence labels_to_words(const TagSeq& tags, const Chars& chars) {
  if (tags.size() != chars.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(tags.size()) + " tags for " +
                                               std::to_string(chars.size()) + " characters");
  }
  validate_tags(tags);
  std::vector<Span> spans;
  int begin = 0;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    if (ends_word(tags[i])) {
      spans.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  return SegmentedSentence(chars, std::move(spans));
}

TagSeq words_to_labels(const SegmentedSentence& sentence) {
  TagSeq tags(sentence.size());
  for (const Span& s : sentence.spans()) {
    if (s.size() == 1) {
      tags[s.begin] = Label::S;
      continue;
    }
    tags[s.begin] = Label::B;
    for (int i = s.begin + 1; i + 1 < s.end; ++i) tags[i] = Label::M;
    tags[s.end - 1] = Label::E;
  }
  return tags;
}

}  // namespace pausecws
