#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gapbench {

// Offsets are Unicode scalar indices into the sentence, end exclusive.
struct TokenScore {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  double logprob_e = 0.0;       // as received, natural log
  double surprisal_bits = 0.0;  // -logprob_e / ln 2

  friend bool operator==(const TokenScore&, const TokenScore&) = default;
};

struct ScoredSentence {
  std::string sentence_id;
  std::string text;
  std::vector<TokenScore> tokens;

  friend bool operator==(const ScoredSentence&, const ScoredSentence&) = default;
};

// Throws Format unless: at least one token; every span is non-empty, inside
// the text, sorted and non-overlapping; characters between spans are
// whitespace; surprisals are finite and non-negative.
void check_scored_sentence(const ScoredSentence& s);

struct CriticalRegion {
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const CriticalRegion&, const CriticalRegion&) = default;
};

struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive

  std::size_t size() const noexcept { return last - first; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// Matches must sit on word boundaries (not flanked by letters or digits).
// occurrence is 1-based. NotFound when there is no (occurrence-th) match;
// AmbiguousRegion when occurrence is absent and there are several.
CriticalRegion locate_region(std::string_view text, std::string_view region_text,
                             std::optional<int> occurrence = std::nullopt);

// Every token overlapping the region, taken whole. CoverageGap when a
// non-whitespace region character falls outside the selected tokens.
TokenRange align_region_to_tokens(const ScoredSentence& s, CriticalRegion r);

double region_surprisal(const ScoredSentence& s, CriticalRegion r);

}  // namespace gapbench
