#include <cmath>
#include <cstdio>
#include <set>

#include "gapbench/error.hpp"
#include "gapbench/scoring.hpp"
#include "gapbench/text.hpp"

namespace gapbench {

ReferenceLM ReferenceLM::train(std::span<const std::string> corpus, double alpha) {
  if (corpus.empty()) throw Error(ErrorKind::InvalidInput, "empty training corpus");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidInput, "smoothing constant must be positive");
  }

  ReferenceLM lm;
  lm.alpha_ = alpha;
  std::set<std::string, std::less<>> types{std::string(kUnknown)};
  for (const auto& line : corpus) {
    for (const auto& w : text::split_words(line)) types.emplace(w.word);
  }
  lm.vocab_.assign(types.begin(), types.end());
  for (std::size_t i = 0; i < lm.vocab_.size(); ++i) lm.ids_.emplace(lm.vocab_[i], i);

  const std::size_t v = lm.vocab_.size();
  lm.unigram_.assign(v, 0.0);
  lm.context_total_.assign(v, 0.0);
  for (const auto& line : corpus) {
    const auto words = text::split_words(line);
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::size_t id = lm.id_of(words[i].word);
      lm.unigram_[id] += 1.0;
      lm.total_ += 1.0;
      if (i > 0) {
        const std::size_t prev = lm.id_of(words[i - 1].word);
        lm.bigram_[prev * v + id] += 1.0;
        lm.context_total_[prev] += 1.0;
      }
    }
  }
  return lm;
}

std::size_t ReferenceLM::id_of(std::string_view word) const {
  auto it = ids_.find(word);
  if (it == ids_.end()) it = ids_.find(kUnknown);
  return it->second;
}

double ReferenceLM::probability(std::optional<std::string_view> prev,
                                std::string_view word) const {
  const double v = static_cast<double>(vocab_.size());
  const std::size_t id = id_of(word);
  if (!prev) return (unigram_[id] + alpha_) / (total_ + alpha_ * v);
  const std::size_t p = id_of(*prev);
  const auto it = bigram_.find(p * vocab_.size() + id);
  const double count = it == bigram_.end() ? 0.0 : it->second;
  return (count + alpha_) / (context_total_[p] + alpha_ * v);
}

double ReferenceLM::log_probability(std::optional<std::string_view> prev,
                                    std::string_view word) const {
  return std::log(probability(prev, word));
}

ProviderInfo ReferenceLM::info() const {
  char model[96];
  std::snprintf(model, sizeof model, "bigram-add-alpha(alpha=%g,|V|=%zu)", alpha_,
                vocab_.size());
  return {"reference", model, true};
}

ScoredSentence ReferenceLM::score_one(const std::string& text) const {
  const auto words = text::split_words(text);
  if (words.empty()) throw Error(ErrorKind::InvalidInput, "cannot score blank text");

  ScoredSentence s;
  s.text = text;
  std::size_t byte_start = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::size_t byte_end = i + 1 == words.size() ? text.size() : words[i].byte_end;
    std::optional<std::string_view> prev;
    if (i > 0) prev = words[i - 1].word;
    s.tokens.push_back(make_token(text.substr(byte_start, byte_end - byte_start),
                                  text::byte_to_char_offset(text, byte_start),
                                  text::byte_to_char_offset(text, byte_end),
                                  log_probability(prev, words[i].word)));
    byte_start = byte_end;
  }
  return s;
}

std::vector<ScoredSentence> ReferenceLM::score(std::span<const std::string> texts) const {
  std::vector<ScoredSentence> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(score_one(t));
  return out;
}

}  // namespace gapbench
