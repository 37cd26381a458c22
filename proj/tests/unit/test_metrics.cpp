#include <doctest.h>

#include <random>

#include "gapbench/error.hpp"
#include "gapbench/metrics.hpp"
#include "support.hpp"

using namespace gapbench;

namespace {

// Scores every sentence of the item with one token per word; region words get
// `region_bits(sentence)` spread over their tokens, others get 1 bit.
ScoreIndex score_item(const ParadigmItem& item,
                      const std::function<double(const StimulusSentence&)>& region_bits) {
  ScoreIndex index;
  for (const auto& s : item.sentences()) {
    const CriticalRegion r = locate_region(s.text, s.region_text, s.region_occurrence);
    const auto words = text::split_words(s.text);
    std::vector<std::size_t> in_region;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::size_t b = text::byte_to_char_offset(s.text, words[i].byte_begin);
      const std::size_t e = text::byte_to_char_offset(s.text, words[i].byte_end);
      if (b < r.char_end && e > r.char_start) in_region.push_back(i);
    }
    const double total = region_bits(s);
    index.insert(gbtest::word_tokens(s.sentence_id(), s.text, [&](std::size_t i) {
      for (std::size_t k : in_region) {
        if (k == i) return total / static_cast<double>(in_region.size());
      }
      return 1.0;
    }));
  }
  return index;
}

double table2(const StimulusSentence& s) {
  const Condition c = s.condition;
  if (c == Condition{true, true, false}) return 4.14;
  if (c == Condition{true, true, true}) return 22.98;
  if (c == Condition{false, false, false}) return 5.77;
  if (c == Condition{false, false, true}) return 23.34;
  return 10.0;
}

}  // namespace

TEST_CASE("wh_effect examples") {
  const ParadigmItem item = expand_template(gbtest::sample_template(1));
  const ScoreIndex scores = score_item(item, [](const StimulusSentence& s) {
    return s.condition.filler ? 3.0 : 5.0;
  });
  const WhEffectResult r = wh_effect(item, WhTest::P1, scores);
  CHECK(r.effect_bits == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r.expected == ExpectedSign::Negative);
  CHECK(r.plus_sentence_id == "1:plusF_plusG1_plusG2");
  CHECK(r.minus_sentence_id == "1:minusF_plusG1_plusG2");
  CHECK(expected_sign(WhTest::P3) == ExpectedSign::Exploratory);
  CHECK(expected_sign(WhTest::P4) == ExpectedSign::Positive);

  const ScoreIndex flat = score_item(item, [](const StimulusSentence&) { return 7.0; });
  for (WhTest t : kWhTests) CHECK(wh_effect(item, t, flat).effect_bits == 0.0);
}

TEST_CASE("missing scores and mismatched text") {
  const ParadigmItem item = expand_template(gbtest::sample_template(1));
  ScoreIndex partial;
  const auto& s = item.at({true, true, true});
  partial.insert(gbtest::word_tokens(s.sentence_id(), s.text, [](std::size_t) { return 1.0; }));
  try {
    wh_effect(item, WhTest::P1, partial);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingScore);
    CHECK(std::string(e.what()).find("1:minusF_plusG1_plusG2") != std::string::npos);
  }
  ScoreIndex wrong;
  wrong.insert(gbtest::word_tokens(s.sentence_id(), "Something else.", [](std::size_t) { return 1.0; }));
  try {
    sentence_region_surprisal(s, wrong);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
}

TEST_CASE("confound example") {
  const ParadigmItem item = expand_template(gbtest::confound_template());
  const ScoreIndex scores = score_item(item, table2);
  const QuadSurprisals q = quad_surprisals(item, scores);
  CHECK(q.plus_ungapped == 4.14);
  CHECK(q.plus_gapped == 22.98);
  CHECK(delta_preference(item, scores, FillerSide::Plus) == doctest::Approx(-18.84).epsilon(1e-12));
  CHECK(delta_preference(item, scores, FillerSide::Minus) == doctest::Approx(-17.57).epsilon(1e-12));
  const DidResult d = did(item, scores);
  CHECK(std::abs(d.did - (-1.27)) < 1e-9);
  CHECK(d.did == d.delta_plus - d.delta_minus);
  CHECK(d.sentence_ids ==
        std::vector<std::string>{"2:plusF_plusG1_plusG2", "2:plusF_plusG1_minusG2",
                                 "2:minusF_minusG1_plusG2", "2:minusF_minusG1_minusG2"});
  const std::vector<double> adverbial = {22.98, 23.34};
  const std::vector<double> nominal = {4.14, 5.77};
  CHECK(std::abs(lexical_disparity(adverbial, nominal) - 18.205) < 1e-9);

  CHECK(delta_preference(QuadSurprisals{3.0, 3.0, 1.0, 1.0}, FillerSide::Plus) == 0.0);
  CHECK(did(QuadSurprisals{1.0, 2.0, 1.0, 2.0}).did == 0.0);
}

TEST_CASE("baseline lexical disparity") {
  const ParadigmItem item = expand_template(gbtest::sample_template(1));
  const ScoreIndex flat = score_item(item, [](const StimulusSentence&) { return 4.0; });
  const std::vector<ParadigmItem> items = {item};
  CHECK(baseline_lexical_disparity(items, flat) == 0.0);
  const ScoreIndex shifted = score_item(item, [](const StimulusSentence& s) {
    return s.condition.gap2 ? 13.0 + s.condition.index() / 2 : 3.0 + s.condition.index() / 2;
  });
  CHECK(baseline_lexical_disparity(items, shifted) == doctest::Approx(10.0).epsilon(1e-12));
  // Sign does not matter.
  const ScoreIndex reversed = score_item(item, [](const StimulusSentence& s) {
    return s.condition.gap2 ? 3.0 : 13.0;
  });
  CHECK(baseline_lexical_disparity(items, reversed) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("accuracy") {
  const std::vector<double> xs = {1.0, -0.5, 2.0};
  CHECK(accuracy(xs, Criterion::Positive) == doctest::Approx(2.0 / 3.0));
  const std::vector<double> zeros = {0.0, 0.0};
  CHECK(accuracy(zeros, Criterion::Positive) == 0.0);
  CHECK(accuracy(zeros, Criterion::Negative) == 0.0);
  CHECK_THROWS_AS(accuracy({}, Criterion::Positive), Error);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> v(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> vals(1 + trial % 13);
    bool has_zero = false;
    for (auto& x : vals) {
      x = v(rng);
      has_zero = has_zero || x == 0.0;
    }
    const double pos = accuracy(vals, Criterion::Positive);
    const double neg = accuracy(vals, Criterion::Negative);
    CHECK(pos >= 0.0);
    CHECK(pos <= 1.0);
    if (has_zero) {
      CHECK(pos + neg < 1.0);
    } else {
      CHECK(pos + neg == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("antisymmetry, shift invariance and the DiD identity") {
  const ParadigmItem item = expand_template(gbtest::sample_template(3));
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> bits(0.0, 25.0);
  for (int trial = 0; trial < 100; ++trial) {
    ScoreIndex scores;
    std::vector<ScoredSentence> raw;
    for (const auto& s : item.sentences()) {
      raw.push_back(gbtest::word_tokens(s.sentence_id(), s.text, [&](std::size_t) { return bits(rng); }));
      scores.insert(raw.back());
    }
    for (WhTest t : kWhTests) {
      const WhPair pair = extract_wh_pair(item, t);
      const WhEffectResult r = wh_effect(item, t, scores);
      // Swap the members: the effect is negated exactly.
      const double swapped = sentence_region_surprisal(pair.minus_filler, scores) -
                             sentence_region_surprisal(pair.plus_filler, scores);
      CHECK(swapped == -r.effect_bits);
      CHECK(r.effect_bits == r.plus_region_bits - r.minus_region_bits);
    }
    const DidResult d = did(item, scores);
    CHECK(d.did == d.delta_plus - d.delta_minus);

    // Shift every token of every sentence by c.
    const double c = 0.75;
    ScoreIndex shifted;
    for (auto s : raw) {
      for (auto& tok : s.tokens) tok.surprisal_bits += c;
      shifted.insert(s);
    }
    for (WhTest t : kWhTests) {
      // Same region text under one tokenizer: equal token counts, no change.
      CHECK(wh_effect(item, t, shifted).effect_bits ==
            doctest::Approx(wh_effect(item, t, scores).effect_bits).epsilon(1e-12));
    }
    // Regions of different token counts ("the CEO" vs "immensely") move by
    // c times the count difference.
    CHECK(d.delta_plus + c * (2 - 1) ==
          doctest::Approx(did(item, shifted).delta_plus).epsilon(1e-12));
  }
}
