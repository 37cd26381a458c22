#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gapbench/alignment.hpp"

namespace gapbench {

// Natural-log probability to surprisal in bits. Throws Domain for positive or
// NaN input.
double logprob_to_bits(double logprob_e);

TokenScore make_token(std::string text, std::size_t char_start, std::size_t char_end,
                      double logprob_e);

// --- wire format --------------------------------------------------------------
//
// One JSON object per line:
//   {"sentence_id": str, "text": str,
//    "tokens": [{"text": str, "char_start": int, "char_end": int,
//                "logprob_e": float}]}

// Throws Format (with the line number, when given) on schema violations,
// positive logprobs, or broken span invariants.
ScoredSentence parse_wire_sentence(std::string_view json_text, std::size_t line = 0);
std::string format_wire_sentence(const ScoredSentence& s);

std::vector<ScoredSentence> parse_token_scores(std::istream& in);
std::vector<ScoredSentence> load_token_scores(const std::string& path);
void write_token_scores(std::ostream& out, std::span<const ScoredSentence> sentences);

// --- providers ----------------------------------------------------------------

struct ProviderInfo {
  std::string name;
  std::string model;
  bool deterministic = true;
};

// Implementations must be safe to call from several threads at once.
class SurprisalProvider {
 public:
  virtual ~SurprisalProvider() = default;
  virtual ProviderInfo info() const = 0;
  // One ScoredSentence per text, in input order.
  virtual std::vector<ScoredSentence> score(std::span<const std::string> texts) const = 0;
};

// Runs the provider and enforces the contract: non-empty input
// (InvalidInput), one result per text with matching text, ScoredSentence
// invariants (Format).
std::vector<ScoredSentence> score_sentences(const SurprisalProvider& provider,
                                            std::span<const std::string> texts);

// Serves precomputed sentences, looked up by exact text.
class FileProvider final : public SurprisalProvider {
 public:
  // Throws Format if the same text appears twice with different tokens.
  explicit FileProvider(std::vector<ScoredSentence> sentences, std::string source = "");
  static FileProvider from_path(const std::string& path);

  ProviderInfo info() const override;
  std::vector<ScoredSentence> score(std::span<const std::string> texts) const override;

 private:
  std::vector<ScoredSentence> sentences_;
  std::unordered_map<std::string, std::size_t> by_text_;
  std::string source_;
};

// Word-level bigram model with additive smoothing. Words are whitespace
// delimited; unseen words map to kUnknown. The first word of a sentence is
// scored with the smoothed unigram distribution.
//
//   P(w)        = (c(w) + alpha) / (N + alpha |V|)
//   P(w | prev) = (c(prev, w) + alpha) / (c(prev, .) + alpha |V|)
//
// Each emitted token spans its word plus any whitespace before it, the way
// byte-level BPE attaches leading spaces.
class ReferenceLM final : public SurprisalProvider {
 public:
  static constexpr std::string_view kUnknown = "<unk>";

  // Throws InvalidInput on an empty corpus or alpha <= 0.
  static ReferenceLM train(std::span<const std::string> corpus, double alpha);

  // Sorted word types, kUnknown included.
  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  double alpha() const noexcept { return alpha_; }

  // P(word | prev); prev = nullopt is the sentence-initial context.
  double probability(std::optional<std::string_view> prev, std::string_view word) const;
  double log_probability(std::optional<std::string_view> prev, std::string_view word) const;

  ProviderInfo info() const override;
  std::vector<ScoredSentence> score(std::span<const std::string> texts) const override;
  ScoredSentence score_one(const std::string& text) const;

 private:
  std::size_t id_of(std::string_view word) const;

  double alpha_ = 1.0;
  std::vector<std::string> vocab_;
  std::map<std::string, std::size_t, std::less<>> ids_;
  std::vector<double> unigram_;
  double total_ = 0.0;
  // Keyed by prev * |V| + next.
  std::unordered_map<std::size_t, double> bigram_;
  std::vector<double> context_total_;
};

struct HttpOptions {
  std::size_t batch_size = 32;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{60};
  std::size_t max_in_flight = 4;
  std::string model = "gpt2";
};

// Client for POST {endpoint}/score with {"texts": [...]} ->
// {"sentences": [...]}. Batches are sent concurrently and reassembled in
// input order. Transport errors, 5xx and 429 are retried with exponential
// backoff; exhausting the attempts throws a retryable Provider error.
class HttpProvider final : public SurprisalProvider {
 public:
  explicit HttpProvider(std::string endpoint, HttpOptions options = {});

  ProviderInfo info() const override;
  std::vector<ScoredSentence> score(std::span<const std::string> texts) const override;

 private:
  std::vector<ScoredSentence> score_batch(std::span<const std::string> texts) const;

  std::string base_url_;
  std::string path_;
  HttpOptions options_;
};

}  // namespace gapbench
