#pragma once

// Two-domain synthetic corpus with simulated pauses. Source and target share
// an alphabet and part of a word vocabulary; the target adds words the source
// never shows. Pauses fall on true boundaries with one rate and inside words
// with another, plus a noise tier of in-word pauses inside words the source
// teaches well, which a source-trained model scores as non-boundaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pausecws/mining.hpp"
#include "pausecws/segmentation.hpp"
#include "pausecws/utf8.hpp"

namespace synthetic {

struct Params {
  int alphabet = 300;
  int source_words = 800;
  int target_shared_words = 700;
  int target_new_words = 100;
  int source_sentences = 2000;
  int target_sentences = 2000;
  int target_dev_sentences = 300;
  int target_test_sentences = 1000;
  int min_words = 5;
  int max_words = 15;
  double zipf_exponent = 1.0;
  double boundary_pause_rate = 0.6;
  double inner_pause_rate = 0.05;
  double noise_word_rate = 0.5;  // shared multi-char words receiving one extra in-word pause
};

struct Word {
  pausecws::Chars chars;
  bool in_source = false;
};

struct Corpus {
  std::vector<Word> vocabulary;
  std::vector<pausecws::SegmentedSentence> source;
  std::vector<pausecws::SegmentedSentence> target_train_gold;  // hidden truth for the mined sentences
  std::vector<pausecws::MinedSentence> target_train;
  std::vector<pausecws::SegmentedSentence> target_dev;
  std::vector<pausecws::SegmentedSentence> target_test;
  // Per mined pause: 0 boundary, 1 in-word at the base rate, 2 noise tier.
  std::vector<std::vector<int>> pause_kind;
};

inline std::string code_point_utf8(char32_t cp) {
  std::string s;
  if (cp < 0x800) {
    s += static_cast<char>(0xC0 | (cp >> 6));
  } else {
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
  }
  s += static_cast<char>(0x80 | (cp & 0x3F));
  return s;
}

class Generator {
 public:
  Generator(const Params& p, std::uint64_t seed) : p_(p), rng_(seed) {}

  Corpus generate() {
    Corpus c;
    for (int k = 0; k < p_.alphabet; ++k) alphabet_.push_back(code_point_utf8(0x4E00 + static_cast<char32_t>(k)));

    std::vector<int> source_ids, target_ids;
    for (int k = 0; k < p_.source_words; ++k) {
      source_ids.push_back(static_cast<int>(c.vocabulary.size()));
      c.vocabulary.push_back({fresh_word(c.vocabulary), true});
    }
    std::vector<int> shuffled = source_ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng_);
    target_ids.assign(shuffled.begin(), shuffled.begin() + p_.target_shared_words);
    for (int k = 0; k < p_.target_new_words; ++k) {
      target_ids.push_back(static_cast<int>(c.vocabulary.size()));
      c.vocabulary.push_back({fresh_word(c.vocabulary), false});
    }
    std::shuffle(target_ids.begin(), target_ids.end(), rng_);

    const auto source_dist = zipf(source_ids.size());
    const auto target_dist = zipf(target_ids.size());
    for (int s = 0; s < p_.source_sentences; ++s) c.source.push_back(sentence(c, source_ids, source_dist));
    for (int s = 0; s < p_.target_sentences; ++s) {
      std::vector<int> words;
      auto gold = sentence(c, target_ids, target_dist, &words);
      auto [mined, kinds] = mine(c, gold, words);
      mined.utterance_id = "t" + std::to_string(s);
      c.target_train_gold.push_back(std::move(gold));
      c.target_train.push_back(std::move(mined));
      c.pause_kind.push_back(std::move(kinds));
    }
    for (int s = 0; s < p_.target_dev_sentences; ++s) c.target_dev.push_back(sentence(c, target_ids, target_dist));
    for (int s = 0; s < p_.target_test_sentences; ++s) c.target_test.push_back(sentence(c, target_ids, target_dist));
    return c;
  }

 private:
  pausecws::Chars fresh_word(const std::vector<Word>& existing) {
    std::discrete_distribution<int> length({25, 50, 15, 10});
    std::uniform_int_distribution<int> ch(0, p_.alphabet - 1);
    for (;;) {
      pausecws::Chars w;
      const int n = 1 + length(rng_);
      for (int i = 0; i < n; ++i) w.push_back(alphabet_[ch(rng_)]);
      const bool dup = std::any_of(existing.begin(), existing.end(), [&](const Word& x) { return x.chars == w; });
      if (!dup) return w;
    }
  }

  std::discrete_distribution<int> zipf(std::size_t n) const {
    std::vector<double> w(n);
    for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), p_.zipf_exponent);
    return std::discrete_distribution<int>(w.begin(), w.end());
  }

  pausecws::SegmentedSentence sentence(const Corpus& c, const std::vector<int>& ids,
                                       std::discrete_distribution<int> dist, std::vector<int>* chosen = nullptr) {
    std::uniform_int_distribution<int> count(p_.min_words, p_.max_words);
    std::vector<std::string> words;
    const int n = count(rng_);
    for (int k = 0; k < n; ++k) {
      const int id = ids[dist(rng_)];
      words.push_back(pausecws::join_chars(c.vocabulary[id].chars));
      if (chosen) chosen->push_back(id);
    }
    return pausecws::SegmentedSentence::from_words(words);
  }

  std::pair<pausecws::MinedSentence, std::vector<int>> mine(const Corpus& c, const pausecws::SegmentedSentence& gold,
                                                             const std::vector<int>& word_ids) {
    std::bernoulli_distribution at_boundary(p_.boundary_pause_rate), inside(p_.inner_pause_rate),
        noise(p_.noise_word_rate);
    std::uniform_real_distribution<double> log_ms(std::log(10.0), std::log(800.0));
    std::uniform_real_distribution<double> short_ms(10.0, 100.0);
    const int n = gold.size();
    std::vector<int> kind(std::max(0, n - 1), -1);
    for (int j = 0; j + 1 < n; ++j) {
      if (gold.boundary_after(j)) {
        if (at_boundary(rng_)) kind[j] = 0;
      } else if (inside(rng_)) {
        kind[j] = 1;
      }
    }
    for (std::size_t k = 0; k < word_ids.size(); ++k) {
      const pausecws::Span sp = gold.spans()[k];
      if (!c.vocabulary[word_ids[k]].in_source || sp.size() < 2 || !noise(rng_)) continue;
      const int j = sp.begin + static_cast<int>(rng_() % static_cast<std::uint64_t>(sp.size() - 1));
      kind[j] = 2;
    }
    pausecws::MinedSentence m{"", gold.chars(), {}};
    std::vector<int> kinds;
    for (int j = 0; j + 1 < n; ++j) {
      if (kind[j] < 0) continue;
      const double ms = kind[j] == 0 ? std::exp(log_ms(rng_)) : short_ms(rng_);
      m.pauses.push_back({j, ms, std::nullopt});
      kinds.push_back(kind[j]);
    }
    return {std::move(m), std::move(kinds)};
  }

  Params p_;
  std::mt19937_64 rng_;
  pausecws::Chars alphabet_;
};

}  // namespace synthetic
