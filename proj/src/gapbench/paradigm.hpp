#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gapbench {

// One cell of the 2x2x2 design. filler: "who" (+F) vs "that" (-F);
// gap1/gap2: true when the parasitic / host gap site is left empty.
struct Condition {
  bool filler = true;
  bool gap1 = true;
  bool gap2 = true;

  // Position in canonical order: +F before -F, then +G1 before -G1, then
  // +G2 before -G2.
  constexpr std::size_t index() const noexcept {
    return (filler ? 0u : 4u) + (gap1 ? 0u : 2u) + (gap2 ? 0u : 1u);
  }
  static constexpr Condition from_index(std::size_t i) noexcept {
    return {(i & 4u) == 0, (i & 2u) == 0, (i & 1u) == 0};
  }

  friend constexpr bool operator==(const Condition&, const Condition&) = default;
};

inline constexpr std::size_t kConditionCount = 8;

// "plusF_minusG1_plusG2" style codes.
std::string format_condition_code(Condition c);
// Throws Parse naming the code and, when nonzero, the source line.
Condition parse_condition_code(std::string_view code, std::size_t line = 0);

struct StimulusSentence {
  int item_id = 0;
  std::string sentence_type;
  Condition condition;
  std::string text;
  std::string region_text;
  std::optional<int> region_occurrence;

  // "<item_id>:<condition code>", the key used for scores and audit rows.
  std::string sentence_id() const;

  friend bool operator==(const StimulusSentence&, const StimulusSentence&) = default;
};

class ParadigmItem {
 public:
  // Throws IncompleteParadigm unless the input holds each condition exactly
  // once, all with the given item_id.
  static ParadigmItem from_sentences(int item_id,
                                     std::vector<StimulusSentence> sentences);

  int item_id() const noexcept { return item_id_; }
  const StimulusSentence& at(Condition c) const { return sentences_[c.index()]; }
  // Canonical condition order.
  const std::array<StimulusSentence, kConditionCount>& sentences() const noexcept {
    return sentences_;
  }

  bool excluded() const noexcept { return excluded_; }
  const std::string& exclusion_reason() const noexcept { return exclusion_reason_; }
  ParadigmItem with_exclusion(std::string reason) const;

  friend bool operator==(const ParadigmItem&, const ParadigmItem&) = default;

 private:
  int item_id_ = 0;
  std::array<StimulusSentence, kConditionCount> sentences_;
  bool excluded_ = false;
  std::string exclusion_reason_;
};

struct ParadigmTemplate {
  int item_id = 0;
  std::string sentence_type = "subject_pg_full";
  std::string prefix;
  std::string filler_word = "who";
  std::string comp_word = "that";
  std::string island_np;
  std::string g1_np;
  std::string predicate;
  std::string g2_np;
  std::string continuation;
};

// Throws InvalidInput when a field is empty or the continuation has no final
// punctuation.
void check_template(const ParadigmTemplate& t);

// Builds the 8 sentences by single-space joining the template parts. Region:
// g2_np for -G2, the first continuation word (punctuation stripped) for +G2.
ParadigmItem expand_template(const ParadigmTemplate& t);

// Template table: header must contain item_id, prefix, island_np, g1_np,
// predicate, g2_np, continuation; filler_word, comp_word and sentence_type
// are optional and fall back to the defaults above when missing or empty.
std::vector<ParadigmTemplate> parse_templates_csv(std::istream& in);
std::vector<ParadigmTemplate> load_templates_csv(const std::string& path);

// Stimuli table (sentence_type,item_id,condition,full_sentence
// [,critical_region,region_occurrence]). Items with no region columns get
// their regions derived from the G2 contrast; see derive_regions.
std::vector<ParadigmItem> parse_stimuli_csv(std::istream& in);
std::vector<ParadigmItem> load_stimuli_csv(const std::string& path);

// Serializes with the region columns, in canonical order.
std::string format_stimuli_csv(const std::vector<ParadigmItem>& items);

// Fills empty region_text fields. The -G2 region is the words the -G2
// sentence inserts relative to its +G2 partner; the +G2 region is the first
// word after that insertion point, punctuation stripped. Leaves the field
// empty when the two sentences do not differ by a single contiguous insertion.
ParadigmItem derive_regions(const ParadigmItem& item);

enum class WhTest { P1, P2, P3, P4 };
inline constexpr std::array<WhTest, 4> kWhTests = {WhTest::P1, WhTest::P2,
                                                  WhTest::P3, WhTest::P4};

std::string_view to_string(WhTest t) noexcept;
// "P1 (+G1, +G2)"
std::string_view label(WhTest t) noexcept;
// Gap configuration held constant by the test (filler field unused).
Condition gap_context(WhTest t) noexcept;

struct WhPair {
  StimulusSentence plus_filler;
  StimulusSentence minus_filler;
};

// Throws RegionMismatch when the two members disagree on region_text.
WhPair extract_wh_pair(const ParadigmItem& item, WhTest test);

struct DidQuad {
  StimulusSentence plus_gapped;     // +F +G1 +G2
  StimulusSentence plus_ungapped;   // +F +G1 -G2
  StimulusSentence minus_gapped;    // -F -G1 +G2
  StimulusSentence minus_ungapped;  // -F -G1 -G2
};

DidQuad extract_did_quad(const ParadigmItem& item);

using VerbBlocklist = std::set<std::string, std::less<>>;

VerbBlocklist default_verb_blocklist();
// Newline-delimited; blank lines and '#' comments are skipped; entries are
// lower-cased.
VerbBlocklist parse_verb_blocklist(std::istream& in);
VerbBlocklist load_verb_blocklist(const std::string& path);

struct ValidationResult {
  std::vector<ParadigmItem> retained;
  std::vector<ParadigmItem> excluded;  // each carries exclusion_reason()
};

// Never throws on bad items; every input item lands in exactly one list.
ValidationResult validate_items(const std::vector<ParadigmItem>& items,
                                const VerbBlocklist& verb_blocklist);

// Word before the filler/complementizer slot, lower-cased and stripped of
// punctuation; nullopt when the +F/-F pair does not differ in one word.
std::optional<std::string> matrix_verb(const ParadigmItem& item);

}  // namespace gapbench
