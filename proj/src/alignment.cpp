#include "gapbench/alignment.hpp"

#include <algorithm>
#include <cmath>

#include "gapbench/error.hpp"
#include "gapbench/text.hpp"

namespace gapbench {

namespace {

bool is_word_byte(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z');
}

std::string span_string(std::size_t a, std::size_t b) {
  return "[" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

void check_scored_sentence(const ScoredSentence& s) {
  const std::string where = "sentence '" + s.sentence_id + "'";
  if (s.tokens.empty()) throw Error(ErrorKind::Format, where + " has no tokens");

  const auto offsets = text::char_to_byte_offsets(s.text);
  const std::size_t length = offsets.size() - 1;

  auto check_whitespace = [&](std::size_t from, std::size_t to) {
    for (std::size_t c = from; c < to; ++c) {
      if (!text::is_space(s.text[offsets[c]])) {
        throw Error(ErrorKind::Format, where + ": character " + std::to_string(c) +
                                           " is not covered by any token");
      }
    }
  };

  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const TokenScore& t = s.tokens[i];
    const std::string tok = where + " token " + std::to_string(i) + " " +
                            span_string(t.char_start, t.char_end);
    if (t.char_start >= t.char_end) throw Error(ErrorKind::Format, tok + " is empty");
    if (t.char_end > length) {
      throw Error(ErrorKind::Format,
                  tok + " exceeds text length " + std::to_string(length));
    }
    if (t.char_start < prev_end) {
      throw Error(ErrorKind::Format, tok + " overlaps the previous token");
    }
    if (!std::isfinite(t.surprisal_bits) || t.surprisal_bits < 0.0) {
      throw Error(ErrorKind::Format, tok + " has invalid surprisal");
    }
    check_whitespace(prev_end, t.char_start);
    prev_end = t.char_end;
  }
  check_whitespace(prev_end, length);
}

CriticalRegion locate_region(std::string_view text, std::string_view region_text,
                             std::optional<int> occurrence) {
  if (region_text.empty()) {
    throw Error(ErrorKind::InvalidInput, "empty region text");
  }
  if (occurrence && *occurrence < 1) {
    throw Error(ErrorKind::InvalidInput,
                "region occurrence must be positive, got " + std::to_string(*occurrence));
  }

  std::vector<std::size_t> matches;
  for (std::size_t pos = text.find(region_text); pos != std::string_view::npos;
       pos = text.find(region_text, pos + 1)) {
    const std::size_t end = pos + region_text.size();
    const bool left_ok = pos == 0 || !is_word_byte(text[pos - 1]) ||
                         !is_word_byte(region_text.front());
    const bool right_ok = end == text.size() || !is_word_byte(text[end]) ||
                          !is_word_byte(region_text.back());
    if (left_ok && right_ok) matches.push_back(pos);
  }

  const std::string what = "'" + std::string(region_text) + "' in '" + std::string(text) + "'";
  std::size_t byte_pos = 0;
  if (occurrence) {
    if (matches.size() < static_cast<std::size_t>(*occurrence)) {
      throw Error(ErrorKind::NotFound, "occurrence " + std::to_string(*occurrence) +
                                           " of " + what);
    }
    byte_pos = matches[static_cast<std::size_t>(*occurrence) - 1];
  } else {
    if (matches.empty()) throw Error(ErrorKind::NotFound, what);
    if (matches.size() > 1) {
      throw Error(ErrorKind::AmbiguousRegion,
                  what + " occurs " + std::to_string(matches.size()) + " times");
    }
    byte_pos = matches.front();
  }

  const std::size_t start = text::byte_to_char_offset(text, byte_pos);
  return {start, start + text::char_length(region_text)};
}

TokenRange align_region_to_tokens(const ScoredSentence& s, CriticalRegion r) {
  const auto offsets = text::char_to_byte_offsets(s.text);
  const std::size_t length = offsets.size() - 1;
  if (r.char_start >= r.char_end || r.char_end > length) {
    throw Error(ErrorKind::InvalidInput, "region " + span_string(r.char_start, r.char_end) +
                                             " outside sentence '" + s.sentence_id + "'");
  }

  TokenRange range{s.tokens.size(), s.tokens.size()};
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const TokenScore& t = s.tokens[i];
    if (t.char_start < r.char_end && r.char_start < t.char_end) {
      if (range.first == s.tokens.size()) range.first = i;
      range.last = i + 1;
    }
  }
  const std::string where = "region " + span_string(r.char_start, r.char_end) +
                            " of sentence '" + s.sentence_id + "'";
  if (range.first == s.tokens.size()) {
    throw Error(ErrorKind::CoverageGap, where + " overlaps no token");
  }

  // Tokens are sorted, so the overlapping set is contiguous; whitespace
  // between them is allowed, anything else is a hole in the offsets.
  std::size_t covered_to = r.char_start;
  for (std::size_t i = range.first; i < range.last; ++i) {
    const TokenScore& t = s.tokens[i];
    for (std::size_t c = covered_to; c < t.char_start && c < r.char_end; ++c) {
      if (!text::is_space(s.text[offsets[c]])) {
        throw Error(ErrorKind::CoverageGap,
                    where + ": character " + std::to_string(c) + " is uncovered");
      }
    }
    covered_to = std::max(covered_to, t.char_end);
  }
  for (std::size_t c = covered_to; c < r.char_end; ++c) {
    if (!text::is_space(s.text[offsets[c]])) {
      throw Error(ErrorKind::CoverageGap,
                  where + ": character " + std::to_string(c) + " is uncovered");
    }
  }
  return range;
}

double region_surprisal(const ScoredSentence& s, CriticalRegion r) {
  const TokenRange range = align_region_to_tokens(s, r);
  double total = 0.0;
  for (std::size_t i = range.first; i < range.last; ++i) {
    total += s.tokens[i].surprisal_bits;
  }
  return total;
}

}  // namespace gapbench
