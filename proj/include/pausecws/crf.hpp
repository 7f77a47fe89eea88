#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pausecws/tagset.hpp"

namespace pausecws {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using LabelRow = std::array<double, kNumLabels>;
using LabelMatrix = std::array<LabelRow, kNumLabels>;

// Log-space factor scores of a linear-chain CRF over one sentence. Hard
// constraints appear as -inf entries in transitions, start and end.
struct Potentials {
  std::vector<LabelRow> emissions;  // one row per character
  LabelMatrix transitions{};
  LabelRow start{};
  LabelRow end{};

  int size() const noexcept { return static_cast<int>(emissions.size()); }

  // All-zero emissions; transitions/start/end at 0 where legal, -inf otherwise.
  static Potentials uniform(int n);
};

// Per-position allowed label sets.
class ConstraintMask {
 public:
  using Row = std::array<bool, kNumLabels>;

  ConstraintMask() = default;
  // Throws Error(InvalidArgument) on an empty row and Error(NoLegalPath)
  // when no legal BMES sequence satisfies every row.
  explicit ConstraintMask(std::vector<Row> rows);

  static ConstraintMask all_allowed(int n);
  // Allows exactly the labels of a legal tag sequence.
  static ConstraintMask forcing(const TagSeq& tags);

  int size() const noexcept { return static_cast<int>(rows_.size()); }
  bool allows(int i, Label l) const { return rows_.at(i)[index_of(l)]; }
  const Row& row(int i) const { return rows_.at(i); }
  // True when every row admits all four labels.
  bool unrestricted() const noexcept;

  friend bool operator==(const ConstraintMask&, const ConstraintMask&) = default;

 private:
  std::vector<Row> rows_;
};

// True when some legal label sequence satisfies every row.
bool admits_legal_path(const std::vector<ConstraintMask::Row>& rows);

double log_sum_exp(double a, double b) noexcept;
template <std::size_t N>
double log_sum_exp(const std::array<double, N>& xs) noexcept {
  double m = kNegInf;
  for (double x : xs) m = x > m ? x : m;
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Sum of start, emission, transition and end scores along tags; -inf if any
// component is illegal. Throws Error(LengthMismatch).
double score_sequence(const Potentials& pot, const TagSeq& tags);

// Forward and backward log tables restricted by an optional mask.
//   alpha[i][l]: log-sum over prefixes ending in l at i, including emission i.
//   beta[i][l]:  log-sum over suffixes after position i given l at i, including end.
struct ForwardBackward {
  std::vector<LabelRow> alpha;
  std::vector<LabelRow> beta;
  double log_z = kNegInf;
};

// Throws Error(SentenceTooShort) on an empty sentence, Error(LengthMismatch)
// on a mask of the wrong length and Error(NoLegalPath) when log Z is -inf.
ForwardBackward forward_backward(const Potentials& pot, const ConstraintMask* mask = nullptr);
double log_partition(const Potentials& pot, const ConstraintMask* mask = nullptr);

// p(l at i, l' at i+1) for every junction; illegal bigrams are exactly 0.
class BigramMarginals {
 public:
  BigramMarginals() = default;
  explicit BigramMarginals(std::vector<LabelMatrix> p) : p_(std::move(p)) {}

  int junctions() const noexcept { return static_cast<int>(p_.size()); }
  double operator()(int i, Label left, Label right) const {
    return p_.at(i)[index_of(left)][index_of(right)];
  }
  const LabelMatrix& at(int i) const { return p_.at(i); }

  // Sum over {S_S, S_B, E_S, E_B}. Throws Error(IndexOutOfRange).
  double boundary_probability(int i) const;
  // Sum over {B_M, B_E, M_M, M_E}.
  double non_boundary_probability(int i) const;

 private:
  std::vector<LabelMatrix> p_;
};

// Throws Error(SentenceTooShort) when the sentence has fewer than 2 characters.
BigramMarginals bigram_marginals(const Potentials& pot, const ConstraintMask* mask = nullptr);
BigramMarginals bigram_marginals(const Potentials& pot, const ForwardBackward& fb);
std::vector<LabelRow> unary_marginals(const Potentials& pot, const ForwardBackward& fb);

double boundary_probability(const Potentials& pot, int junction);

// Highest-scoring legal sequence respecting the mask. Among equal scores the
// sequence with the smallest label at the earliest differing position wins.
// Throws Error(NoLegalPath).
TagSeq viterbi(const Potentials& pot, const ConstraintMask* mask = nullptr);

}  // namespace pausecws
