#include "pausecws/crf.hpp"

#include <string>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

void check_mask(const Potentials& pot, const ConstraintMask* mask) {
  if (mask && mask->size() != pot.size()) {
    throw Error(ErrorKind::LengthMismatch, "mask of length " + std::to_string(mask->size()) +
                                               " for sentence of length " + std::to_string(pot.size()));
  }
}

bool allowed(const ConstraintMask* mask, int i, int l) {
  return !mask || mask->row(i)[l];
}

}  // namespace

Potentials Potentials::uniform(int n) {
  Potentials pot;
  pot.emissions.assign(n, LabelRow{});
  const auto& t = legal_transitions();
  for (Label a : kAllLabels) {
    for (Label b : kAllLabels) pot.transitions[index_of(a)][index_of(b)] = t.allowed(a, b) ? 0.0 : kNegInf;
    pot.start[index_of(a)] = t.can_start(a) ? 0.0 : kNegInf;
    pot.end[index_of(a)] = t.can_end(a) ? 0.0 : kNegInf;
  }
  return pot;
}

bool admits_legal_path(const std::vector<ConstraintMask::Row>& rows) {
  if (rows.empty()) return true;
  const auto& t = legal_transitions();
  std::array<bool, kNumLabels> reach{};
  for (Label l : kAllLabels) reach[index_of(l)] = rows[0][index_of(l)] && t.can_start(l);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::array<bool, kNumLabels> next{};
    for (Label b : kAllLabels) {
      if (!rows[i][index_of(b)]) continue;
      for (Label a : kAllLabels) next[index_of(b)] = next[index_of(b)] || (reach[index_of(a)] && t.allowed(a, b));
    }
    reach = next;
  }
  for (Label l : kAllLabels) {
    if (reach[index_of(l)] && t.can_end(l)) return true;
  }
  return false;
}

ConstraintMask::ConstraintMask(std::vector<Row> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& r = rows_[i];
    if (!(r[0] || r[1] || r[2] || r[3])) {
      throw Error(ErrorKind::InvalidArgument, "mask row " + std::to_string(i) + " allows no label");
    }
  }
  if (!admits_legal_path(rows_)) throw Error(ErrorKind::NoLegalPath, "constraint mask admits no legal sequence");
}

ConstraintMask ConstraintMask::all_allowed(int n) {
  return ConstraintMask(std::vector<Row>(n, Row{true, true, true, true}));
}

ConstraintMask ConstraintMask::forcing(const TagSeq& tags) {
  std::vector<Row> rows(tags.size(), Row{});
  for (std::size_t i = 0; i < tags.size(); ++i) rows[i][index_of(tags[i])] = true;
  return ConstraintMask(std::move(rows));
}

bool ConstraintMask::unrestricted() const noexcept {
  for (const Row& r : rows_) {
    if (!(r[0] && r[1] && r[2] && r[3])) return false;
  }
  return true;
}

double log_sum_exp(double a, double b) noexcept {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double score_sequence(const Potentials& pot, const TagSeq& tags) {
  if (static_cast<int>(tags.size()) != pot.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(tags.size()) + " tags for " +
                                               std::to_string(pot.size()) + " characters");
  }
  if (tags.empty()) return 0.0;
  double s = pot.start[index_of(tags[0])];
  for (std::size_t i = 0; i < tags.size(); ++i) {
    s += pot.emissions[i][index_of(tags[i])];
    if (i + 1 < tags.size()) s += pot.transitions[index_of(tags[i])][index_of(tags[i + 1])];
  }
  return s + pot.end[index_of(tags.back())];
}

ForwardBackward forward_backward(const Potentials& pot, const ConstraintMask* mask) {
  const int n = pot.size();
  if (n == 0) throw Error(ErrorKind::SentenceTooShort, "empty sentence");
  check_mask(pot, mask);

  ForwardBackward fb;
  fb.alpha.assign(n, LabelRow{});
  fb.beta.assign(n, LabelRow{});

  for (int l = 0; l < kNumLabels; ++l) {
    fb.alpha[0][l] = allowed(mask, 0, l) ? pot.start[l] + pot.emissions[0][l] : kNegInf;
  }
  for (int i = 1; i < n; ++i) {
    for (int l = 0; l < kNumLabels; ++l) {
      if (!allowed(mask, i, l)) {
        fb.alpha[i][l] = kNegInf;
        continue;
      }
      LabelRow in;
      for (int k = 0; k < kNumLabels; ++k) in[k] = fb.alpha[i - 1][k] + pot.transitions[k][l];
      fb.alpha[i][l] = log_sum_exp(in) + pot.emissions[i][l];
    }
  }

  for (int l = 0; l < kNumLabels; ++l) fb.beta[n - 1][l] = allowed(mask, n - 1, l) ? pot.end[l] : kNegInf;
  for (int i = n - 2; i >= 0; --i) {
    for (int k = 0; k < kNumLabels; ++k) {
      if (!allowed(mask, i, k)) {
        fb.beta[i][k] = kNegInf;
        continue;
      }
      LabelRow out;
      for (int l = 0; l < kNumLabels; ++l) {
        out[l] = pot.transitions[k][l] + pot.emissions[i + 1][l] + fb.beta[i + 1][l];
      }
      fb.beta[i][k] = log_sum_exp(out);
    }
  }

  LabelRow fin;
  for (int l = 0; l < kNumLabels; ++l) fin[l] = fb.alpha[n - 1][l] + pot.end[l];
  fb.log_z = log_sum_exp(fin);
  if (fb.log_z == kNegInf) throw Error(ErrorKind::NoLegalPath, "no legal label sequence");
  return fb;
}

double log_partition(const Potentials& pot, const ConstraintMask* mask) {
  return forward_backward(pot, mask).log_z;
}

BigramMarginals bigram_marginals(const Potentials& pot, const ForwardBackward& fb) {
  const int n = pot.size();
  std::vector<LabelMatrix> p(n > 0 ? n - 1 : 0);
  for (int i = 0; i + 1 < n; ++i) {
    for (int k = 0; k < kNumLabels; ++k) {
      for (int l = 0; l < kNumLabels; ++l) {
        const double s = fb.alpha[i][k] + pot.transitions[k][l] + pot.emissions[i + 1][l] + fb.beta[i + 1][l];
        p[i][k][l] = s == kNegInf ? 0.0 : std::exp(s - fb.log_z);
      }
    }
  }
  return BigramMarginals(std::move(p));
}

BigramMarginals bigram_marginals(const Potentials& pot, const ConstraintMask* mask) {
  if (pot.size() < 2) throw Error(ErrorKind::SentenceTooShort, "bigram marginals need at least 2 characters");
  return bigram_marginals(pot, forward_backward(pot, mask));
}

std::vector<LabelRow> unary_marginals(const Potentials& pot, const ForwardBackward& fb) {
  std::vector<LabelRow> p(pot.size());
  for (int i = 0; i < pot.size(); ++i) {
    for (int l = 0; l < kNumLabels; ++l) {
      const double s = fb.alpha[i][l] + fb.beta[i][l];
      p[i][l] = s == kNegInf ? 0.0 : std::exp(s - fb.log_z);
    }
  }
  return p;
}

double BigramMarginals::boundary_probability(int i) const {
  if (i < 0 || i >= junctions()) throw Error(ErrorKind::IndexOutOfRange, "junction " + std::to_string(i));
  double s = 0.0;
  for (auto [a, b] : boundary_bigrams()) s += p_[i][index_of(a)][index_of(b)];
  return s;
}

double BigramMarginals::non_boundary_probability(int i) const {
  if (i < 0 || i >= junctions()) throw Error(ErrorKind::IndexOutOfRange, "junction " + std::to_string(i));
  double s = 0.0;
  for (auto [a, b] : non_boundary_bigrams()) s += p_[i][index_of(a)][index_of(b)];
  return s;
}

double boundary_probability(const Potentials& pot, int junction) {
  if (junction < 0 || junction + 1 >= pot.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "junction " + std::to_string(junction));
  }
  return bigram_marginals(pot).boundary_probability(junction);
}

TagSeq viterbi(const Potentials& pot, const ConstraintMask* mask) {
  const int n = pot.size();
  if (n == 0) throw Error(ErrorKind::SentenceTooShort, "empty sentence");
  check_mask(pot, mask);

  // Suffix maxima: best[i][l] is the best score of positions i..n-1 given l at
  // i, including emission i and the end weight. Decoding then walks forward
  // and takes the smallest label among equal totals, which yields the
  // lexicographically smallest optimal sequence.
  std::vector<LabelRow> best(n);
  for (int l = 0; l < kNumLabels; ++l) {
    best[n - 1][l] = allowed(mask, n - 1, l) ? pot.emissions[n - 1][l] + pot.end[l] : kNegInf;
  }
  for (int i = n - 2; i >= 0; --i) {
    for (int k = 0; k < kNumLabels; ++k) {
      double m = kNegInf;
      if (allowed(mask, i, k)) {
        for (int l = 0; l < kNumLabels; ++l) {
          const double s = pot.transitions[k][l] + best[i + 1][l];
          if (s > m) m = s;
        }
      }
      best[i][k] = m == kNegInf ? kNegInf : pot.emissions[i][k] + m;
    }
  }

  TagSeq tags(n);
  double top = kNegInf;
  int pick = -1;
  for (int l = 0; l < kNumLabels; ++l) {
    const double s = pot.start[l] + best[0][l];
    if (s > top) {
      top = s;
      pick = l;
    }
  }
  if (pick < 0) throw Error(ErrorKind::NoLegalPath, "no legal label sequence");
  tags[0] = static_cast<Label>(pick);
  for (int i = 1; i < n; ++i) {
    const int prev = pick;
    double m = kNegInf;
    pick = -1;
    for (int l = 0; l < kNumLabels; ++l) {
      const double s = pot.transitions[prev][l] + best[i][l];
      if (s > m) {
        m = s;
        pick = l;
      }
    }
    tags[i] = static_cast<Label>(pick);
  }
  return tags;
}

}  // namespace pausecws
