#include "pausecws/tagset.hpp"

#include <string>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

TransitionTable make_table() {
  TransitionTable t;
  using L = Label;
  const LabelBigram legal[] = {{L::B, L::M}, {L::B, L::E}, {L::M, L::M}, {L::M, L::E},
                               {L::E, L::B}, {L::E, L::S}, {L::S, L::B}, {L::S, L::S}};
  for (auto [a, b] : legal) t.legal[index_of(a)][index_of(b)] = true;
  t.legal_start[index_of(L::B)] = t.legal_start[index_of(L::S)] = true;
  t.legal_end[index_of(L::E)] = t.legal_end[index_of(L::S)] = true;
  return t;
}

}  // namespace

char label_char(Label l) noexcept { return "BMES"[index_of(l)]; }

Label label_from_char(char c) {
  switch (c) {
    case 'B': return Label::B;
    case 'M': return Label::M;
    case 'E': return Label::E;
    case 'S': return Label::S;
    default: throw Error(ErrorKind::ParseError, std::string("unknown label '") + c + "'");
  }
}

TagSeq tags_from_string(std::string_view s) {
  TagSeq tags;
  tags.reserve(s.size());
  for (char c : s) tags.push_back(label_from_char(c));
  return tags;
}

std::string tags_to_string(const TagSeq& tags) {
  std::string s;
  for (Label l : tags) s += label_char(l);
  return s;
}

const TransitionTable& legal_transitions() noexcept {
  static const TransitionTable table = make_table();
  return table;
}

std::vector<LabelBigram> boundary_bigrams() {
  return {{Label::S, Label::S}, {Label::S, Label::B}, {Label::E, Label::S}, {Label::E, Label::B}};
}

std::vector<LabelBigram> non_boundary_bigrams() {
  return {{Label::B, Label::M}, {Label::B, Label::E}, {Label::M, Label::M}, {Label::M, Label::E}};
}

bool is_boundary_bigram(Label left, Label right) noexcept {
  return legal_transitions().allowed(left, right) && ends_word(left);
}

void validate_tags(std::span<const Label> tags) {
  if (tags.empty()) return;
  const auto& t = legal_transitions();
  if (!t.can_start(tags.front())) {
    throw Error(ErrorKind::IllegalTagSequence,
                std::string("sequence cannot start with ") + label_char(tags.front()));
  }
  for (std::size_t i = 0; i + 1 < tags.size(); ++i) {
    if (!t.allowed(tags[i], tags[i + 1])) {
      throw Error(ErrorKind::IllegalTagSequence,
                  std::string("illegal transition ") + label_char(tags[i]) + "_" +
                      label_char(tags[i + 1]) + " at position " + std::to_string(i));
    }
  }
  if (!t.can_end(tags.back())) {
    throw Error(ErrorKind::IllegalTagSequence,
                std::string("sequence cannot end with ") + label_char(tags.back()));
  }
}

bool is_legal(std::span<const Label> tags) noexcept {
  try {
    validate_tags(tags);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace pausecws
