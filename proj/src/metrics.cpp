#include "gapbench/metrics.hpp"

#include <cmath>

#include "gapbench/error.hpp"

namespace gapbench {

ScoreIndex::ScoreIndex(std::vector<ScoredSentence> sentences) {
  for (auto& s : sentences) insert(std::move(s));
}

void ScoreIndex::insert(ScoredSentence s) {
  std::string id = s.sentence_id;
  by_id_.insert_or_assign(std::move(id), std::move(s));
}

const ScoredSentence& ScoreIndex::at(std::string_view sentence_id) const {
  const auto it = by_id_.find(sentence_id);
  if (it == by_id_.end()) {
    throw Error(ErrorKind::MissingScore, "no scores for sentence '" +
                                             std::string(sentence_id) + "'");
  }
  return it->second;
}

bool ScoreIndex::contains(std::string_view sentence_id) const {
  return by_id_.find(sentence_id) != by_id_.end();
}

double sentence_region_surprisal(const StimulusSentence& s, const ScoreIndex& scores) {
  const std::string id = s.sentence_id();
  const ScoredSentence& scored = scores.at(id);
  if (scored.text != s.text) {
    throw Error(ErrorKind::Format, "scored text for '" + id + "' does not match stimulus: '" +
                                       scored.text + "' vs '" + s.text + "'");
  }
  return region_surprisal(scored, locate_region(s.text, s.region_text, s.region_occurrence));
}

std::string_view to_string(ExpectedSign s) noexcept {
  switch (s) {
    case ExpectedSign::Negative: return "negative";
    case ExpectedSign::Positive: return "positive";
    case ExpectedSign::Exploratory: return "exploratory";
  }
  return "?";
}

ExpectedSign expected_sign(WhTest test) noexcept {
  switch (test) {
    case WhTest::P1:
    case WhTest::P2: return ExpectedSign::Negative;
    case WhTest::P3: return ExpectedSign::Exploratory;
    case WhTest::P4: return ExpectedSign::Positive;
  }
  return ExpectedSign::Exploratory;
}

WhEffectResult wh_effect(const ParadigmItem& item, WhTest test, const ScoreIndex& scores) {
  const WhPair pair = extract_wh_pair(item, test);
  WhEffectResult r;
  r.item_id = item.item_id();
  r.test = test;
  r.plus_region_bits = sentence_region_surprisal(pair.plus_filler, scores);
  r.minus_region_bits = sentence_region_surprisal(pair.minus_filler, scores);
  r.effect_bits = r.plus_region_bits - r.minus_region_bits;
  r.expected = expected_sign(test);
  r.plus_sentence_id = pair.plus_filler.sentence_id();
  r.minus_sentence_id = pair.minus_filler.sentence_id();
  return r;
}

QuadSurprisals quad_surprisals(const ParadigmItem& item, const ScoreIndex& scores) {
  const DidQuad quad = extract_did_quad(item);
  return {sentence_region_surprisal(quad.plus_gapped, scores),
          sentence_region_surprisal(quad.plus_ungapped, scores),
          sentence_region_surprisal(quad.minus_gapped, scores),
          sentence_region_surprisal(quad.minus_ungapped, scores)};
}

double delta_preference(const QuadSurprisals& quad, FillerSide side) noexcept {
  return side == FillerSide::Plus ? quad.plus_ungapped - quad.plus_gapped
                                  : quad.minus_ungapped - quad.minus_gapped;
}

double delta_preference(const ParadigmItem& item, const ScoreIndex& scores, FillerSide side) {
  return delta_preference(quad_surprisals(item, scores), side);
}

DidResult did(const QuadSurprisals& quad, int item_id) noexcept {
  DidResult r;
  r.item_id = item_id;
  r.delta_plus = delta_preference(quad, FillerSide::Plus);
  r.delta_minus = delta_preference(quad, FillerSide::Minus);
  r.did = r.delta_plus - r.delta_minus;
  return r;
}

DidResult did(const ParadigmItem& item, const ScoreIndex& scores) {
  DidResult r = did(quad_surprisals(item, scores), item.item_id());
  const DidQuad quad = extract_did_quad(item);
  r.sentence_ids = {quad.plus_gapped.sentence_id(), quad.plus_ungapped.sentence_id(),
                    quad.minus_gapped.sentence_id(), quad.minus_ungapped.sentence_id()};
  return r;
}

double accuracy(std::span<const double> values, Criterion criterion) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "accuracy of an empty list");
  std::size_t hits = 0;
  for (double v : values) {
    if (criterion == Criterion::Positive ? v > 0.0 : v < 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

double lexical_disparity(std::span<const double> adverbial, std::span<const double> nominal) {
  if (adverbial.empty() || nominal.empty()) {
    throw Error(ErrorKind::InvalidInput, "lexical disparity needs both region kinds");
  }
  auto mean = [](std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
  };
  return std::fabs(mean(adverbial) - mean(nominal));
}

double baseline_lexical_disparity(std::span<const ParadigmItem> items,
                                  const ScoreIndex& scores) {
  if (items.empty()) throw Error(ErrorKind::InvalidInput, "no items for lexical disparity");
  double total = 0.0;
  for (const auto& item : items) {
    std::vector<double> adverbial;
    std::vector<double> nominal;
    for (const auto& s : item.sentences()) {
      (s.condition.gap2 ? adverbial : nominal).push_back(sentence_region_surprisal(s, scores));
    }
    total += lexical_disparity(adverbial, nominal);
  }
  return total / static_cast<double>(items.size());
}

}  // namespace gapbench
