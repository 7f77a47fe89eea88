#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pausecws/utf8.hpp"

namespace pausecws {

// BMES labels. The integer order B < M < E < S is also the tie-break order
// used by Viterbi decoding.
enum class Label : std::uint8_t { B = 0, M = 1, E = 2, S = 3 };

inline constexpr int kNumLabels = 4;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {Label::B, Label::M, Label::E, Label::S};

constexpr int index_of(Label l) noexcept { return static_cast<int>(l); }
char label_char(Label l) noexcept;
Label label_from_char(char c);  // throws Error(ParseError)

using TagSeq = std::vector<Label>;
using LabelBigram = std::pair<Label, Label>;

TagSeq tags_from_string(std::string_view s);
std::string tags_to_string(const TagSeq& tags);

struct TransitionTable {
  std::array<std::array<bool, kNumLabels>, kNumLabels> legal{};
  std::array<bool, kNumLabels> legal_start{};
  std::array<bool, kNumLabels> legal_end{};

  bool allowed(Label from, Label to) const noexcept { return legal[index_of(from)][index_of(to)]; }
  bool can_start(Label l) const noexcept { return legal_start[index_of(l)]; }
  bool can_end(Label l) const noexcept { return legal_end[index_of(l)]; }
};

const TransitionTable& legal_transitions() noexcept;

// {S_S, S_B, E_S, E_B}: a word boundary sits between the two positions.
std::vector<LabelBigram> boundary_bigrams();
// {B_M, B_E, M_M, M_E}: the two positions belong to the same word.
std::vector<LabelBigram> non_boundary_bigrams();

constexpr bool ends_word(Label l) noexcept { return l == Label::E || l == Label::S; }
constexpr bool starts_word(Label l) noexcept { return l == Label::B || l == Label::S; }
bool is_boundary_bigram(Label left, Label right) noexcept;

// Throws Error(IllegalTagSequence) naming the first offending position.
void validate_tags(std::span<const Label> tags);
bool is_legal(std::span<const Label> tags) noexcept;

}  // namespace pausecws
