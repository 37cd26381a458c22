#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <string_view>

#include "gapbench/alignment.hpp"
#include "gapbench/error.hpp"
#include "gapbench/paradigm.hpp"
#include "gapbench/text.hpp"

#ifndef GAPBENCH_TEST_DATA
#define GAPBENCH_TEST_DATA "."
#endif

namespace gbtest {

// Kind of the gapbench::Error thrown by f; Invariant when nothing is thrown.
inline gapbench::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const gapbench::Error& e) {
    return e.kind();
  }
  return gapbench::ErrorKind::Invariant;
}

inline std::string data_path(std::string_view name) {
  return std::string(GAPBENCH_TEST_DATA) + "/" + std::string(name);
}

// One token per word, leading whitespace attached, surprisal chosen per word
// index by `bits`.
inline gapbench::ScoredSentence word_tokens(const std::string& id, const std::string& text,
                                            const std::function<double(std::size_t)>& bits) {
  gapbench::ScoredSentence s{id, text, {}};
  const auto words = gapbench::text::split_words(text);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    gapbench::TokenScore t;
    t.text = text.substr(begin, words[i].byte_end - begin);
    t.char_start = gapbench::text::byte_to_char_offset(text, begin);
    t.char_end = gapbench::text::byte_to_char_offset(text, words[i].byte_end);
    t.surprisal_bits = bits(i);
    t.logprob_e = -t.surprisal_bits * std::log(2.0);
    s.tokens.push_back(t);
    begin = words[i].byte_end;
  }
  return s;
}

// The four-condition example of the confound discussion, as a template.
inline gapbench::ParadigmTemplate confound_template() {
  gapbench::ParadigmTemplate t;
  t.item_id = 2;
  t.prefix = "I know";
  t.island_np = "Bob's talking to";
  t.g1_np = "Jennifer";
  t.predicate = "is about to bother";
  t.g2_np = "you";
  t.continuation = "soon.";
  return t;
}

inline gapbench::ParadigmTemplate sample_template(int id) {
  gapbench::ParadigmTemplate t;
  t.item_id = id;
  if (id == 1) {
    t.prefix = "The investigators know";
    t.island_np = "the story about";
    t.g1_np = "the politician";
    t.predicate = "is likely to damage";
    t.g2_np = "the campaign";
    t.continuation = "severely.";
  } else if (id == 2) {
    t.prefix = "The audience believed";
    t.island_np = "the picture of";
    t.g1_np = "the actor";
    t.predicate = "might have flattered";
    t.g2_np = "the director";
    t.continuation = "greatly.";
  } else {
    t.prefix = "The board understood";
    t.island_np = "the critique of";
    t.g1_np = "the new project";
    t.predicate = "would probably anger";
    t.g2_np = "the CEO";
    t.continuation = "immensely.";
  }
  return t;
}

}  // namespace gbtest
