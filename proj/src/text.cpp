#include "gapbench/text.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "gapbench/error.hpp"

namespace gapbench {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::IncompleteParadigm: return "IncompleteParadigm";
    case ErrorKind::RegionMismatch: return "RegionMismatch";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::AmbiguousRegion: return "AmbiguousRegion";
    case ErrorKind::CoverageGap: return "CoverageGap";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::Provider: return "ProviderError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::MissingScore: return "MissingScore";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::NoValidItems: return "NoValidItems";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Invariant: return "InvariantBreach";
  }
  return "Unknown";
}

namespace text {

namespace {

// Length of the UTF-8 sequence starting with lead byte c, or 0 if invalid.
std::size_t sequence_length(unsigned char c) noexcept {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 0;
}

}  // namespace

std::vector<std::size_t> char_to_byte_offsets(std::string_view utf8) {
  std::vector<std::size_t> offsets;
  offsets.reserve(utf8.size() + 1);
  std::size_t i = 0;
  while (i < utf8.size()) {
    const std::size_t len = sequence_length(static_cast<unsigned char>(utf8[i]));
    if (len == 0 || i + len > utf8.size()) {
      throw Error(ErrorKind::Format,
                  "malformed UTF-8 at byte " + std::to_string(i));
    }
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(utf8[i + k]) & 0xC0) != 0x80) {
        throw Error(ErrorKind::Format,
                    "malformed UTF-8 at byte " + std::to_string(i + k));
      }
    }
    offsets.push_back(i);
    i += len;
  }
  offsets.push_back(utf8.size());
  return offsets;
}

std::size_t char_length(std::string_view utf8) {
  return char_to_byte_offsets(utf8).size() - 1;
}

std::size_t byte_to_char_offset(std::string_view utf8, std::size_t byte_offset) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < byte_offset && i < utf8.size(); ++i) {
    if ((static_cast<unsigned char>(utf8[i]) & 0xC0) != 0x80) ++chars;
  }
  return chars;
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<WordSpan> split_words(std::string_view s) {
  std::vector<WordSpan> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    const std::size_t begin = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    words.push_back({s.substr(begin, i - begin), begin, i});
  }
  return words;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string_view strip_punct(std::string_view word) noexcept {
  auto punct = [](char c) {
    return static_cast<unsigned char>(c) < 0x80 &&
           std::ispunct(static_cast<unsigned char>(c));
  };
  while (!word.empty() && punct(word.front())) word.remove_prefix(1);
  while (!word.empty() && punct(word.back())) word.remove_suffix(1);
  return word;
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string fixed(double value, int precision) {
  if (!std::isfinite(value)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s(buf);
  // "-0.00" -> "0.00"
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') {
    s.erase(0, 1);
  }
  return s;
}

}  // namespace text
}  // namespace gapbench
