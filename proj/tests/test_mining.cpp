#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"
#include "pausecws/mining.hpp"
#include "pausecws/pipeline.hpp"
#include "test_util.hpp"

using namespace pausecws;
using doctest::Approx;

namespace {

Pause scored(int junction, double ms, double p) { return {junction, ms, p}; }

std::vector<double> probs(const std::vector<Pause>& v) {
  std::vector<double> out;
  for (const auto& p : v) out.push_back(*p.probability);
  return out;
}

CrfModel zero_model_for(const Chars& c) { return CrfModel::for_sentences({&c}); }

}  // namespace

TEST_CASE("score_pauses examples") {
  const Chars ab = split_utf8("ab");
  const auto out = score_pauses(zero_model_for(ab), ab, {Pause{0, 30.0, std::nullopt}});
  REQUIRE(out.size() == 1);
  CHECK(*out[0].probability == Approx(0.5));
  CHECK(score_pauses(zero_model_for(ab), ab, {}).empty());
  CHECK_THROWS_KIND(score_pauses(zero_model_for(ab), ab, {Pause{1, 30.0, std::nullopt}}), ErrorKind::IndexOutOfRange);

  std::mt19937_64 rng(1);
  const std::vector<Chars> sents = {split_utf8("有人在细细地倾听")};
  for (int trial = 0; trial < 20; ++trial) {
    const CrfModel m = oracle::random_model(rng, sents, 2.0);
    std::vector<Pause> all;
    for (int j = 0; j < 7; ++j) all.push_back({j, 20.0, std::nullopt});
    for (const auto& p : score_pauses(m, sents[0], all)) {
      CHECK(*p.probability >= 0.0);
      CHECK(*p.probability <= 1.0);
      CHECK(*p.probability == Approx(oracle::boundary_probability(m.potentials(sents[0]), p.junction)).epsilon(1e-10));
    }
  }
}

TEST_CASE("filter_pauses examples") {
  const std::vector<Pause> v = {scored(0, 20, 0.95), scored(1, 20, 0.4), scored(2, 20, 0.6)};
  CHECK(probs(filter_pauses(v, 0.5)) == std::vector<double>{0.95, 0.6});
  CHECK(filter_pauses(v, 0.0).size() == 3);
  CHECK(probs(filter_pauses(v, 0.9)) == std::vector<double>{0.95});
  CHECK_THROWS_KIND(filter_pauses({Pause{0, 20, std::nullopt}}, 0.5), ErrorKind::UnscoredPause);
}

TEST_CASE("filter_pauses composes as the max threshold") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Pause> v;
    for (int j = 0; j < 20; ++j) v.push_back(scored(j, 20, trial % 5 == 0 ? std::round(u(rng) * 10) / 10 : u(rng)));
    const double t1 = u(rng), t2 = u(rng);
    CHECK(filter_pauses(filter_pauses(v, t1), t2) == filter_pauses(v, std::max(t1, t2)));
    const auto lo = filter_pauses(v, 0.1), mid = filter_pauses(v, 0.5), hi = filter_pauses(v, 0.9);
    CHECK(lo.size() >= mid.size());
    CHECK(mid.size() >= hi.size());
    for (const auto& p : hi) CHECK(std::find(mid.begin(), mid.end(), p) != mid.end());
  }
}

TEST_CASE("constraint mask for the listening sentence") {
  const PartialSentence p = parse_partial_line("有人|在细细地|倾听");
  CHECK(p.boundaries == std::vector<int>{1, 5});
  const ConstraintMask m = build_constraint_mask(p);
  const ConstraintMask::Row es{false, false, true, true}, bs{true, false, false, true}, all{true, true, true, true};
  CHECK(m.row(1) == es);
  CHECK(m.row(2) == bs);
  CHECK(m.row(5) == es);
  CHECK(m.row(6) == bs);
  for (int i : {0, 3, 4, 7}) CHECK(m.row(i) == all);

  CHECK(build_constraint_mask({split_utf8("abc"), {}}).unrestricted());
  // Two characters with a boundary: only SS survives.
  const ConstraintMask two = build_constraint_mask({split_utf8("ab"), {0}});
  CHECK(tags_to_string(viterbi(Potentials::uniform(2), &two)) == "SS");
  CHECK(log_partition(Potentials::uniform(2), &two) == 0.0);
  // Adjacent boundaries intersect to {S}.
  const ConstraintMask adj = build_constraint_mask({split_utf8("abc"), {0, 1}});
  CHECK(adj.row(1) == ConstraintMask::Row{false, false, false, true});

  CHECK_THROWS_KIND(build_constraint_mask({split_utf8("ab"), {1}}), ErrorKind::IndexOutOfRange);
  CHECK_THROWS_KIND(build_constraint_mask({split_utf8("abc"), {1, 0}}), ErrorKind::InvalidArgument);
}

TEST_CASE("legal paths through a mask realize exactly the asserted boundaries") {
  for (int n = 1; n <= 6; ++n) {
    for (std::uint32_t bits = 0; bits < (1u << (n - 1)); ++bits) {
      PartialSentence p{testutil::letters(n), {}};
      for (int j = 0; j + 1 < n; ++j) {
        if ((bits >> j) & 1u) p.boundaries.push_back(j);
      }
      const ConstraintMask mask = build_constraint_mask(p);
      std::vector<std::array<bool, 4>> rows;
      for (int i = 0; i < n; ++i) rows.push_back(mask.row(i));
      const auto admitted = oracle::admitted(n, &rows);
      // Free junctions stay free: 2^(free junctions) paths remain.
      CHECK(admitted.size() == (1u << (n - 1 - p.boundaries.size())));
      for (const auto& t : admitted) {
        const auto seg = labels_to_words(t, p.chars);
        for (int b : p.boundaries) CHECK(seg.boundary_after(b));
      }
    }
  }
}

TEST_CASE("masked viterbi keeps every asserted boundary") {
  std::mt19937_64 rng(21);
  const std::vector<Chars> sents = {split_utf8("有人在细细地倾听"), split_utf8("细细的雨在下")};
  for (int trial = 0; trial < 100; ++trial) {
    const CrfModel m = oracle::random_model(rng, sents, 3.0);
    const Chars& c = sents[trial % 2];
    PartialSentence p{c, {}};
    for (int j = 0; j + 1 < static_cast<int>(c.size()); ++j) {
      if (rng() % 3 == 0) p.boundaries.push_back(j);
    }
    const SegmentedSentence done = complete_annotation(m, p);
    for (int b : p.boundaries) CHECK(done.boundary_after(b));
  }
}

TEST_CASE("partial line format") {
  const PartialSentence p = parse_partial_line("a\\|b|c\\\\d|e");
  CHECK(p.chars == Chars{"a", "|", "b", "c", "\\", "d", "e"});
  CHECK(p.boundaries == std::vector<int>{2, 5});
  CHECK(format_partial_line(p) == "a\\|b|c\\\\d|e");
  // Edge and doubled marks carry no information.
  const PartialSentence q = parse_partial_line("|ab||c|");
  CHECK(q.boundaries == std::vector<int>{1});
  CHECK(format_partial_line(q) == "ab|c");
  CHECK_THROWS_KIND(parse_partial_line("ab\\c"), ErrorKind::ParseError);

  std::mt19937_64 rng(5);
  const Chars alphabet = {"a", "|", "\\", "字", "。"};
  for (int trial = 0; trial < 300; ++trial) {
    PartialSentence r;
    const int n = static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) r.chars.push_back(alphabet[rng() % alphabet.size()]);
    for (int j = 0; j + 1 < n; ++j) {
      if (rng() % 2) r.boundaries.push_back(j);
    }
    CHECK(parse_partial_line(format_partial_line(r)) == r);
  }
}

TEST_CASE("mined records round-trip through JSON lines") {
  MinedSentence m{"u7", split_utf8("有人在"), {scored(0, 230.0, 0.25), Pause{1, 12.5, std::nullopt}}};
  CHECK(mined_from_json_line(mined_to_json_line(m)) == m);
  CHECK_THROWS_KIND(mined_from_json_line("[1,2]"), ErrorKind::ParseError);
  CHECK_THROWS_KIND(mined_from_json_line(R"({"text":"ab","pauses":[{"junction":1,"duration_ms":3}]})"),
                    ErrorKind::IndexOutOfRange);
  CHECK(to_partial(m).boundaries == std::vector<int>{0, 1});
}

TEST_CASE("bin edges") {
  CHECK(probability_bin(0.0) == 0);
  CHECK(probability_bin(0.0999) == 0);
  CHECK(probability_bin(0.1) == 1);
  CHECK(probability_bin(0.8999) == 1);
  CHECK(probability_bin(0.9) == 2);
  CHECK(probability_bin(0.999) == 2);
  CHECK(probability_bin(1.0 - 1e-13) == 3);
  CHECK(probability_bin(1.0) == 3);
  CHECK(duration_bin(9.99) == -1);
  CHECK(duration_bin(10.0) == 0);
  CHECK(duration_bin(50.0) == 1);
  CHECK(duration_bin(150.0) == 2);
  CHECK(duration_bin(499.0) == 2);
  CHECK(duration_bin(500.0) == 3);
  CHECK(duration_bin(1e6) == 3);
}

TEST_CASE("pause statistics examples") {
  const std::vector<MinedSentence> one = {{"u", split_utf8("有人在"), {scored(0, 230.0, 0.95)}}};
  const PauseStats s = pause_statistics(one);
  CHECK(s.counts[2][2] == 1);
  CHECK(s.total == 1);
  CHECK(s.overall_percent[2] == Approx(100.0));
  CHECK(s.internal_percent[2][2] == Approx(100.0));
  CHECK_FALSE(s.accuracy.has_value());

  const std::vector<SegmentedSentence> gold = {SegmentedSentence::from_line("有 人在")};
  const PauseStats g = pause_statistics(one, &gold);
  REQUIRE(g.accuracy.has_value());
  CHECK((*g.accuracy)[2] == Approx(100.0));
  CHECK(std::isnan((*g.accuracy)[0]));

  const std::vector<SegmentedSentence> other = {SegmentedSentence::from_line("有人 在")};
  CHECK((*pause_statistics(one, &other).accuracy)[2] == Approx(0.0));
  const std::vector<SegmentedSentence> wrong = {SegmentedSentence::from_line("你 好")};
  CHECK_THROWS_KIND(pause_statistics(one, &wrong), ErrorKind::SentenceMismatch);
  CHECK_THROWS_KIND(pause_statistics({{"u", split_utf8("ab"), {Pause{0, 20, std::nullopt}}}}), ErrorKind::UnscoredPause);
}

TEST_CASE("pause statistics match an independent recount") {
  std::mt19937_64 rng(8);
  // Representative values for each bin, chosen away from the edges.
  const double prob_rep[4] = {0.05, 0.5, 0.95, 1.0};
  const double dur_rep[4] = {20.0, 100.0, 300.0, 800.0};
  for (int trial = 0; trial < 50; ++trial) {
    std::array<std::array<std::int64_t, 4>, 4> expected{};
    std::array<std::int64_t, 4> expected_correct{};
    std::vector<MinedSentence> mined;
    std::vector<SegmentedSentence> gold;
    std::int64_t short_ones = 0;
    for (int s = 0; s < 10; ++s) {
      const auto seg = testutil::random_segmentation(rng, 2 + static_cast<int>(rng() % 12));
      MinedSentence m{"u", seg.chars(), {}};
      for (int j = 0; j + 1 < seg.size(); ++j) {
        if (rng() % 2) continue;
        if (rng() % 10 == 0) {
          m.pauses.push_back(scored(j, 5.0, 0.5));
          ++short_ones;
          continue;
        }
        const int pb = static_cast<int>(rng() % 4), db = static_cast<int>(rng() % 4);
        m.pauses.push_back(scored(j, dur_rep[db], prob_rep[pb]));
        ++expected[pb][db];
        if (seg.boundary_after(j)) ++expected_correct[pb];
      }
      mined.push_back(std::move(m));
      gold.push_back(seg);
    }
    const PauseStats st = pause_statistics(mined, &gold);
    CHECK(st.counts == expected);
    CHECK(st.below_min_duration == short_ones);
    std::int64_t total = 0;
    for (const auto& row : expected) for (auto c : row) total += c;
    CHECK(st.total == total);
    double overall_sum = 0.0;
    for (int pb = 0; pb < 4; ++pb) {
      std::int64_t row = 0;
      for (auto c : expected[pb]) row += c;
      const double pct = total ? 100.0 * static_cast<double>(row) / static_cast<double>(total) : 0.0;
      CHECK(st.overall_percent[pb] == Approx(pct).epsilon(1e-12));
      overall_sum += st.overall_percent[pb];
      double internal_sum = 0.0;
      for (int db = 0; db < 4; ++db) {
        const double ip = row ? 100.0 * static_cast<double>(expected[pb][db]) / static_cast<double>(row) : 0.0;
        CHECK(st.internal_percent[pb][db] == Approx(ip).epsilon(1e-12));
        internal_sum += st.internal_percent[pb][db];
      }
      if (row) CHECK(std::abs(internal_sum - 100.0) <= 0.1);
      CHECK(st.correct[pb] == expected_correct[pb]);
      if (row) CHECK((*st.accuracy)[pb] == Approx(100.0 * static_cast<double>(expected_correct[pb]) / static_cast<double>(row)));
    }
    if (total) CHECK(std::abs(overall_sum - 100.0) <= 0.1);
  }
}

TEST_CASE("stats table lists every bin") {
  const std::vector<MinedSentence> one = {{"u", split_utf8("有人在"), {scored(0, 230.0, 0.95), scored(1, 60.0, 1.0)}}};
  std::ostringstream out;
  write_pause_stats(out, pause_statistics(one));
  const std::string s = out.str();
  for (int b = 0; b < 4; ++b) {
    CHECK(s.find(std::string(probability_bin_label(b))) != std::string::npos);
    CHECK(s.find(std::string(duration_bin_label(b))) != std::string::npos);
  }
}
