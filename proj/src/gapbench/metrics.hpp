#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gapbench/alignment.hpp"
#include "gapbench/paradigm.hpp"

namespace gapbench {

// Scored sentences keyed by sentence_id ("<item_id>:<condition code>").
class ScoreIndex {
 public:
  ScoreIndex() = default;
  explicit ScoreIndex(std::vector<ScoredSentence> sentences);

  void insert(ScoredSentence s);
  // Throws MissingScore.
  const ScoredSentence& at(std::string_view sentence_id) const;
  bool contains(std::string_view sentence_id) const;
  std::size_t size() const noexcept { return by_id_.size(); }

 private:
  std::map<std::string, ScoredSentence, std::less<>> by_id_;
};

// Summed surprisal of the stimulus' critical region in its scored sentence.
// Throws MissingScore, Format when the scored text differs from the stimulus
// text, and the locate/align errors otherwise.
double sentence_region_surprisal(const StimulusSentence& s, const ScoreIndex& scores);

enum class ExpectedSign { Negative, Positive, Exploratory };

std::string_view to_string(ExpectedSign s) noexcept;
ExpectedSign expected_sign(WhTest test) noexcept;

struct WhEffectResult {
  int item_id = 0;
  WhTest test = WhTest::P1;
  double effect_bits = 0.0;  // S(+F region) - S(-F region)
  double plus_region_bits = 0.0;
  double minus_region_bits = 0.0;
  ExpectedSign expected = ExpectedSign::Negative;
  std::string plus_sentence_id;
  std::string minus_sentence_id;

  friend bool operator==(const WhEffectResult&, const WhEffectResult&) = default;
};

WhEffectResult wh_effect(const ParadigmItem& item, WhTest test, const ScoreIndex& scores);

// Region surprisals of the four DiD conditions.
struct QuadSurprisals {
  double plus_gapped = 0.0;
  double plus_ungapped = 0.0;
  double minus_gapped = 0.0;
  double minus_ungapped = 0.0;
};

QuadSurprisals quad_surprisals(const ParadigmItem& item, const ScoreIndex& scores);

enum class FillerSide { Plus, Minus };

// S(ungapped) - S(gapped) on the requested filler side.
double delta_preference(const QuadSurprisals& quad, FillerSide side) noexcept;
double delta_preference(const ParadigmItem& item, const ScoreIndex& scores, FillerSide side);

struct DidResult {
  int item_id = 0;
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double did = 0.0;  // delta_plus - delta_minus
  // plus_gapped, plus_ungapped, minus_gapped, minus_ungapped
  std::vector<std::string> sentence_ids;

  friend bool operator==(const DidResult&, const DidResult&) = default;
};

DidResult did(const QuadSurprisals& quad, int item_id = 0) noexcept;
DidResult did(const ParadigmItem& item, const ScoreIndex& scores);

enum class Criterion { Positive, Negative };  // > 0, < 0

// Fraction of values strictly satisfying the criterion; zeros fail both.
// Throws InvalidInput on an empty list.
double accuracy(std::span<const double> values, Criterion criterion);

// |mean(adverbial) - mean(nominal)| for one item's region surprisals.
double lexical_disparity(std::span<const double> adverbial, std::span<const double> nominal);

// Mean over items of lexical_disparity between the four +G2 (post-gap word)
// and four -G2 (overt NP) regions.
double baseline_lexical_disparity(std::span<const ParadigmItem> items,
                                  const ScoreIndex& scores);

}  // namespace gapbench
