#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "pausecws/segmentation.hpp"
#include "pausecws/tagset.hpp"
#include "test_util.hpp"

using namespace pausecws;

TEST_CASE("label encoding is B=0 M=1 E=2 S=3") {
  CHECK(index_of(Label::B) == 0);
  CHECK(index_of(Label::M) == 1);
  CHECK(index_of(Label::E) == 2);
  CHECK(index_of(Label::S) == 3);
  CHECK(tags_to_string(tags_from_string("BMES")) == "BMES");
  CHECK_THROWS_KIND(label_from_char('X'), ErrorKind::ParseError);
}

TEST_CASE("legal transition table") {
  const auto& t = legal_transitions();
  CHECK(t.allowed(Label::B, Label::M));
  CHECK_FALSE(t.allowed(Label::B, Label::B));
  CHECK(t.allowed(Label::E, Label::B));
  const std::set<std::string> expected = {"BM", "BE", "MM", "ME", "EB", "ES", "SB", "SS"};
  std::set<std::string> got;
  for (Label a : kAllLabels) {
    for (Label b : kAllLabels) {
      if (t.allowed(a, b)) got.insert(std::string{label_char(a), label_char(b)});
    }
  }
  CHECK(got == expected);
  CHECK(t.can_start(Label::B));
  CHECK(t.can_start(Label::S));
  CHECK_FALSE(t.can_start(Label::M));
  CHECK_FALSE(t.can_start(Label::E));
  CHECK(t.can_end(Label::E));
  CHECK(t.can_end(Label::S));
  CHECK_FALSE(t.can_end(Label::B));
  CHECK_FALSE(t.can_end(Label::M));
}

TEST_CASE("boundary and non-boundary bigrams partition the legal bigrams") {
  const auto bnd = boundary_bigrams();
  const auto non = non_boundary_bigrams();
  CHECK(bnd.size() == 4);
  CHECK(std::find(bnd.begin(), bnd.end(), LabelBigram{Label::E, Label::S}) != bnd.end());
  CHECK(std::find(bnd.begin(), bnd.end(), LabelBigram{Label::B, Label::M}) == bnd.end());
  std::set<LabelBigram> all(bnd.begin(), bnd.end());
  for (const auto& b : non) {
    CHECK(all.count(b) == 0);
    all.insert(b);
  }
  CHECK(all.size() == 8);
  for (const auto& [a, b] : all) {
    CHECK(legal_transitions().allowed(a, b));
    CHECK(is_boundary_bigram(a, b) == (ends_word(a) && starts_word(b)));
  }
}

TEST_CASE("labels_to_words examples") {
  CHECK(labels_to_words(tags_from_string("SS"), testutil::letters(2)).words() ==
        std::vector<std::string>{"a", "b"});
  CHECK(labels_to_words(tags_from_string("BE"), testutil::letters(2)).words() ==
        std::vector<std::string>{"ab"});
  CHECK(labels_to_words(tags_from_string("BME"), testutil::letters(3)).words() ==
        std::vector<std::string>{"abc"});
}

TEST_CASE("labels_to_words rejects illegal sequences") {
  for (const char* bad : {"BB", "MS", "SE", "BS", "SM", "B", "E", "M", "EB"}) {
    CAPTURE(bad);
    const TagSeq tags = tags_from_string(bad);
    CHECK_THROWS_KIND(labels_to_words(tags, testutil::letters(static_cast<int>(tags.size()))),
                      ErrorKind::IllegalTagSequence);
    CHECK_FALSE(is_legal(tags));
  }
  CHECK_THROWS_KIND(labels_to_words(tags_from_string("SS"), testutil::letters(3)),
                    ErrorKind::LengthMismatch);
}

TEST_CASE("single-character sentences admit only S") {
  CHECK(is_legal(tags_from_string("S")));
  for (const char* bad : {"B", "M", "E"}) CHECK_FALSE(is_legal(tags_from_string(bad)));
}

TEST_CASE("legal sequences and segmentations are in bijection for n <= 8") {
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    // All 4^n label strings, filtered by the library's legality check.
    std::set<TagSeq> legal;
    int total = 1;
    for (int k = 0; k < n; ++k) total *= 4;
    for (int code = 0; code < total; ++code) {
      TagSeq t(n);
      int c = code;
      for (int k = 0; k < n; ++k, c /= 4) t[k] = static_cast<Label>(c % 4);
      if (is_legal(t)) legal.insert(t);
    }
    const auto enumerated = oracle::legal_sequences(n);
    CHECK(legal.size() == (1u << (n - 1)));
    CHECK(legal == std::set<TagSeq>(enumerated.begin(), enumerated.end()));

    std::set<std::vector<Span>> segmentations;
    const Chars chars = testutil::letters(n);
    for (const auto& t : legal) {
      const auto seg = labels_to_words(t, chars);
      segmentations.insert(seg.spans());
      CHECK(words_to_labels(seg) == t);
    }
    CHECK(segmentations.size() == legal.size());
  }
}

TEST_CASE("words_to_labels round-trips random segmentations") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    const auto seg = testutil::random_segmentation(rng, n);
    const TagSeq tags = words_to_labels(seg);
    CHECK(is_legal(tags));
    CHECK(labels_to_words(tags, seg.chars()) == seg);
  }
}

TEST_CASE("segmented sentence parsing") {
  const auto s = SegmentedSentence::from_line("有 人 在 细细 地 倾听");
  CHECK(s.size() == 8);
  CHECK(s.word_count() == 6);
  CHECK(s.word(3) == "细细");
  CHECK(s.to_line() == "有 人 在 细细 地 倾听");
  CHECK(s.boundaries() == std::vector<int>{0, 1, 2, 4, 5});
  CHECK(tags_to_string(words_to_labels(s)) == "SSSBESBE");
  CHECK_THROWS_KIND(SegmentedSentence(testutil::letters(3), {{0, 1}, {2, 3}}), ErrorKind::InvalidArgument);
}
