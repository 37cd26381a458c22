#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the paradigm, alignment, and scoring code.
// Character offsets everywhere in gapbench are Unicode scalar indices.
namespace gapbench::text {

// Number of Unicode scalar values in a UTF-8 string. Throws Format on
// malformed UTF-8.
std::size_t char_length(std::string_view utf8);

// Byte offset of every scalar value, plus one trailing entry equal to
// utf8.size(). result[i] is the byte offset of character i.
std::vector<std::size_t> char_to_byte_offsets(std::string_view utf8);

// Character index for a byte offset that falls on a scalar boundary.
std::size_t byte_to_char_offset(std::string_view utf8, std::size_t byte_offset);

bool is_space(char c) noexcept;

struct WordSpan {
  std::string_view word;
  std::size_t byte_begin;
  std::size_t byte_end;
};

// Maximal runs of non-whitespace bytes.
std::vector<WordSpan> split_words(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Strips leading and trailing ASCII punctuation.
std::string_view strip_punct(std::string_view word) noexcept;

std::string_view trim(std::string_view s) noexcept;

// Fixed-point formatting ("%.*f"). Non-finite values print as "NA".
std::string fixed(double value, int precision);

}  // namespace gapbench::text
