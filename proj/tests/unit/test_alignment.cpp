#include <doctest.h>

#include <random>

#include "gapbench/alignment.hpp"
#include "gapbench/error.hpp"
#include "support.hpp"

using namespace gapbench;
using gbtest::kind_of;

namespace {


ScoredSentence the_cat_sat() {
  return {"x", "The cat sat",
          {{"The", 0, 3, 0.0, 1.0}, {" cat", 3, 7, 0.0, 2.0}, {" sat", 7, 11, 0.0, 4.0}}};
}

}  // namespace

TEST_CASE("locate_region") {
  CHECK(locate_region("a b a", "a", 2) == CriticalRegion{4, 5});
  CHECK(locate_region("a b a", "a", 1) == CriticalRegion{0, 1});
  CHECK(kind_of([] { locate_region("a b", "c"); }) == ErrorKind::NotFound);
  CHECK(kind_of([] { locate_region("a a", "a"); }) == ErrorKind::AmbiguousRegion);
  CHECK(kind_of([] { locate_region("a b a", "a", 3); }) == ErrorKind::NotFound);
  CHECK(kind_of([] { locate_region("a b", ""); }) == ErrorKind::InvalidInput);
  // Word boundaries: "the CEO" inside "the CEOs" is not a match.
  CHECK(kind_of([] { locate_region("ask the CEOs", "the CEO"); }) == ErrorKind::NotFound);
  CHECK(locate_region("damage severely.", "severely") == CriticalRegion{7, 15});
  // Offsets count scalar values, not bytes.
  CHECK(locate_region("caf\xC3\xA9 au lait", "lait") == CriticalRegion{8, 12});
}

TEST_CASE("align_region_to_tokens") {
  const ScoredSentence s = the_cat_sat();
  CHECK(align_region_to_tokens(s, locate_region(s.text, "cat")) == TokenRange{1, 2});
  CHECK(align_region_to_tokens(s, {4, 11}) == TokenRange{1, 3});
  CHECK(align_region_to_tokens(s, {0, 11}) == TokenRange{0, 3});
  CHECK(region_surprisal(s, locate_region(s.text, "cat")) == 2.0);
  CHECK(region_surprisal(s, {0, 11}) == 7.0);
  CHECK(kind_of([&] { align_region_to_tokens(s, {5, 20}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("summation and single-token examples") {
  const ScoredSentence two{"x", "ab cd", {{"ab", 0, 2, 0.0, 1.5}, {" cd", 2, 5, 0.0, 2.5}}};
  CHECK(region_surprisal(two, {0, 5}) == 4.0);
  const ScoredSentence you{"x", "bother you soon",
                           {{"bother", 0, 6, 0.0, 1.0}, {" you", 6, 10, 0.0, 4.14},
                            {" soon", 10, 15, 0.0, 22.98}}};
  CHECK(region_surprisal(you, locate_region(you.text, "you")) == 4.14);
}

TEST_CASE("coverage gap") {
  // Token spans skip the middle of a word.
  const ScoredSentence holes{"x", "abcdef", {{"ab", 0, 2, 0.0, 1.0}, {"ef", 4, 6, 0.0, 1.0}}};
  CHECK(kind_of([&] { align_region_to_tokens(holes, {0, 6}); }) == ErrorKind::CoverageGap);
  CHECK(kind_of([&] { align_region_to_tokens(holes, {2, 4}); }) == ErrorKind::CoverageGap);
}

TEST_CASE("check_scored_sentence") {
  CHECK_NOTHROW(check_scored_sentence(the_cat_sat()));
  ScoredSentence s = the_cat_sat();
  s.tokens[1].char_start = 2;
  CHECK(kind_of([&] { check_scored_sentence(s); }) == ErrorKind::Format);
  s = the_cat_sat();
  s.tokens[2].char_end = 12;
  CHECK(kind_of([&] { check_scored_sentence(s); }) == ErrorKind::Format);
  s = the_cat_sat();
  s.tokens[0].surprisal_bits = -1.0;
  CHECK(kind_of([&] { check_scored_sentence(s); }) == ErrorKind::Format);
  s = the_cat_sat();
  s.tokens.clear();
  CHECK(kind_of([&] { check_scored_sentence(s); }) == ErrorKind::Format);
}

TEST_CASE("straddling tokens are included whole") {
  // Subword pieces: " sev" [23,27) "erely" [27,32) "." [32,33)
  const std::string text = "The story will damage severely.";
  const ScoredSentence s = gbtest::word_tokens("x", text, [](std::size_t i) { return 1.0 + i; });
  const CriticalRegion r = locate_region(text, "severely");
  const TokenRange range = align_region_to_tokens(s, r);
  CHECK(range == TokenRange{4, 5});
  // The last token is " severely." and carries its full surprisal.
  CHECK(region_surprisal(s, r) == 5.0);
  // A region covering part of a token still takes the whole token.
  CHECK(region_surprisal(s, {r.char_start + 2, r.char_start + 3}) == 5.0);
}

TEST_CASE("additivity, monotonicity and determinism on random tokenizations") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> bits(0.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    // Random tiling of a 40-character string into tokens.
    const std::size_t len = 40;
    std::string text(len, 'x');
    ScoredSentence s{"r", text, {}};
    std::size_t pos = 0;
    std::uniform_int_distribution<std::size_t> width(1, 5);
    while (pos < len) {
      const std::size_t end = std::min(len, pos + width(rng));
      s.tokens.push_back({text.substr(pos, end - pos), pos, end, 0.0, bits(rng)});
      pos = end;
    }
    std::uniform_int_distribution<std::size_t> tok(0, s.tokens.size() - 1);
    std::size_t a = tok(rng), b = tok(rng), c = tok(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (a == b || b == c) continue;
    // Adjacent, token-aligned regions [a, b) and [b, c).
    const CriticalRegion left{s.tokens[a].char_start, s.tokens[b - 1].char_end};
    const CriticalRegion right{s.tokens[b].char_start, s.tokens[c - 1].char_end};
    const CriticalRegion both{left.char_start, right.char_end};
    const double sum = region_surprisal(s, left) + region_surprisal(s, right);
    CHECK(region_surprisal(s, both) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(region_surprisal(s, both) >= region_surprisal(s, left));
    CHECK(region_surprisal(s, both) >= region_surprisal(s, right));
    CHECK(region_surprisal(s, both) == region_surprisal(s, both));

    // Growing an arbitrary character region one character at a time.
    std::uniform_int_distribution<std::size_t> ch(0, len - 1);
    const std::size_t start = ch(rng);
    double prev = 0.0;
    for (std::size_t end = start + 1; end <= len; ++end) {
      const double v = region_surprisal(s, {start, end});
      CHECK(v >= prev);
      prev = v;
    }
  }
}
