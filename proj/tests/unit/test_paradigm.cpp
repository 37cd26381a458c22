#include <doctest.h>

#include <set>
#include <sstream>

#include "gapbench/error.hpp"
#include "gapbench/paradigm.hpp"
#include "support.hpp"

using namespace gapbench;
using gbtest::kind_of;

namespace {

const char* kCodes[] = {
    "plusF_plusG1_plusG2",   "plusF_plusG1_minusG2",   "plusF_minusG1_plusG2",
    "plusF_minusG1_minusG2", "minusF_plusG1_plusG2",   "minusF_plusG1_minusG2",
    "minusF_minusG1_plusG2", "minusF_minusG1_minusG2",
};


}  // namespace

TEST_CASE("condition codes") {
  CHECK(parse_condition_code("plusF_minusG1_plusG2") == Condition{true, false, true});
  CHECK(parse_condition_code("minusF_minusG1_minusG2") == Condition{false, false, false});
  CHECK(kind_of([] { parse_condition_code("plusF_plusG1"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_condition_code("plusF_plusG1_plusG2_x"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_condition_code("PlusF_plusG1_plusG2"); }) == ErrorKind::Parse);

  for (std::size_t i = 0; i < kConditionCount; ++i) {
    const Condition c = parse_condition_code(kCodes[i]);
    CHECK(format_condition_code(c) == kCodes[i]);
    CHECK(c.index() == i);
    CHECK(Condition::from_index(i) == c);
  }
}

TEST_CASE("parse error names the code and line") {
  try {
    parse_condition_code("plusF_plusG1", 7);
    FAIL("no throw");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("plusF_plusG1") != std::string::npos);
    CHECK(msg.find("7") != std::string::npos);
  }
}

TEST_CASE("expand_template builds the eight sentences") {
  const ParadigmItem item = expand_template(gbtest::sample_template(1));
  CHECK(item.at({true, true, true}).text ==
        "The investigators know who the story about is likely to damage severely.");
  CHECK(item.at({false, false, false}).text ==
        "The investigators know that the story about the politician is likely to damage the "
        "campaign severely.");
  CHECK(item.at({true, false, false}).region_text == "the campaign");
  CHECK(item.at({true, false, true}).region_text == "severely");
  for (const auto& s : item.sentences()) {
    CHECK(s.item_id == 1);
    CHECK(s.sentence_type == "subject_pg_full");
    CHECK(s.text.find("  ") == std::string::npos);
  }
}

TEST_CASE("check_template rejects empty parts") {
  ParadigmTemplate t = gbtest::sample_template(1);
  t.g2_np.clear();
  CHECK(kind_of([&] { check_template(t); }) == ErrorKind::InvalidInput);
  t = gbtest::sample_template(1);
  t.continuation = "severely";
  CHECK(kind_of([&] { check_template(t); }) == ErrorKind::InvalidInput);
}

TEST_CASE("sample listing loads into three complete items") {
  const auto items = load_stimuli_csv(gbtest::data_path("sample_stimuli.csv"));
  REQUIRE(items.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(items[i].item_id() == i + 1);
  CHECK(items[0].at({true, true, true}).sentence_id() == "1:plusF_plusG1_plusG2");
  // Regions are derived from the G2 contrast when the CSV has no region columns.
  CHECK(items[0].at({true, false, false}).region_text == "the campaign");
  CHECK(items[0].at({false, true, true}).region_text == "severely");
  CHECK(items[2].at({true, true, false}).region_text == "the CEO");
  CHECK(items[2].at({true, true, true}).region_text == "immensely");
}

TEST_CASE("expanded templates match the sample listing") {
  const auto listed = load_stimuli_csv(gbtest::data_path("sample_stimuli.csv"));
  for (int id = 1; id <= 3; ++id) {
    const ParadigmItem expanded = expand_template(gbtest::sample_template(id));
    CHECK(expanded == listed[id - 1]);
  }
}

TEST_CASE("expand then serialize then load is the identity") {
  std::vector<ParadigmItem> items;
  for (int id = 1; id <= 3; ++id) items.push_back(expand_template(gbtest::sample_template(id)));
  ParadigmTemplate extra = gbtest::confound_template();
  extra.item_id = 4;
  items.push_back(expand_template(extra));
  std::istringstream in(format_stimuli_csv(items));
  CHECK(parse_stimuli_csv(in) == items);
}

TEST_CASE("templates CSV") {
  const auto templates = load_templates_csv(gbtest::data_path("sample_templates.csv"));
  REQUIRE(templates.size() == 3);
  CHECK(templates[2].g1_np == "the new project");

  std::istringstream minimal(
      "item_id,prefix,island_np,g1_np,predicate,g2_np,continuation\n"
      "9,I know,Bob's talking to,Jennifer,is about to bother,you,soon.\n");
  const auto t = parse_templates_csv(minimal);
  REQUIRE(t.size() == 1);
  CHECK(t[0].filler_word == "who");
  CHECK(t[0].comp_word == "that");
  CHECK(expand_template(t[0]).at({true, true, true}).text ==
        "I know who Bob's talking to is about to bother soon.");

  std::istringstream missing("item_id,prefix\n1,x\n");
  CHECK(kind_of([&] { parse_templates_csv(missing); }) == ErrorKind::Parse);
}

TEST_CASE("stimuli CSV errors") {
  const std::string header = "sentence_type,item_id,condition,full_sentence\n";
  std::string seven = header;
  for (int i = 0; i < 7; ++i) {
    seven += std::string("subject_pg_full,1,") + kCodes[i] + ",Sentence number " +
             std::to_string(i) + ".\n";
  }
  std::istringstream in7(seven);
  try {
    parse_stimuli_csv(in7);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IncompleteParadigm);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }

  std::istringstream empty(header);
  CHECK(parse_stimuli_csv(empty).empty());

  std::string dup = header;
  for (int i = 0; i < 8; ++i) {
    dup += std::string("subject_pg_full,1,") + kCodes[i == 7 ? 0 : i] + ",A b c.\n";
  }
  std::istringstream in_dup(dup);
  CHECK(kind_of([&] { parse_stimuli_csv(in_dup); }) == ErrorKind::IncompleteParadigm);

  std::istringstream bad_header("type,item,condition,sentence\n");
  CHECK(kind_of([&] { parse_stimuli_csv(bad_header); }) == ErrorKind::Parse);

  std::istringstream bad_code(header + "subject_pg_full,1,plusF_plusG1,x.\n");
  try {
    parse_stimuli_csv(bad_code);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::istringstream bad_id(header + "subject_pg_full,one,plusF_plusG1_plusG2,x.\n");
  CHECK(kind_of([&] { parse_stimuli_csv(bad_id); }) == ErrorKind::Parse);

  std::istringstream short_row(header + "subject_pg_full,1\n");
  CHECK(kind_of([&] { parse_stimuli_csv(short_row); }) == ErrorKind::Parse);
}

TEST_CASE("validate_items with the default blocklist") {
  const auto items = load_stimuli_csv(gbtest::data_path("sample_stimuli.csv"));
  const auto v = validate_items(items, default_verb_blocklist());
  REQUIRE(v.retained.size() == 2);
  CHECK(v.retained[0].item_id() == 1);
  CHECK(v.retained[1].item_id() == 3);
  REQUIRE(v.excluded.size() == 1);
  CHECK(v.excluded[0].item_id() == 2);
  CHECK(v.excluded[0].exclusion_reason() == "anti-rogative verb");

  CHECK(validate_items(items, {}).retained.size() == 3);
  CHECK(matrix_verb(items[1]) == "believed");
  CHECK(matrix_verb(items[0]) == "know");
}

TEST_CASE("ambiguous and missing regions are excluded") {
  ParadigmTemplate t = gbtest::sample_template(1);
  t.predicate = "is likely to damage the campaign and";
  const ParadigmItem twice = expand_template(t);
  const auto v = validate_items({twice}, {});
  REQUIRE(v.excluded.size() == 1);
  CHECK(v.excluded[0].exclusion_reason() == "ambiguous region");

  // An explicit occurrence resolves it.
  std::vector<StimulusSentence> sentences(twice.sentences().begin(), twice.sentences().end());
  for (auto& s : sentences) {
    if (!s.condition.gap2) s.region_occurrence = 2;
  }
  const auto resolved = ParadigmItem::from_sentences(1, sentences);
  CHECK(validate_items({resolved}, {}).retained.size() == 1);

  for (auto& s : sentences) {
    if (!s.condition.gap2) s.region_text = "the voters";
  }
  const auto missing = ParadigmItem::from_sentences(1, sentences);
  const auto vm = validate_items({missing}, {});
  REQUIRE(vm.excluded.size() == 1);
  CHECK(vm.excluded[0].exclusion_reason() == "region not found");
}

TEST_CASE("region disagreement inside a pair") {
  const ParadigmItem item = expand_template(gbtest::sample_template(1));
  std::vector<StimulusSentence> sentences(item.sentences().begin(), item.sentences().end());
  sentences[Condition{false, true, true}.index()].region_text = "damage";
  const auto broken = ParadigmItem::from_sentences(1, sentences);
  CHECK(kind_of([&] { extract_wh_pair(broken, WhTest::P1); }) == ErrorKind::RegionMismatch);
  const auto v = validate_items({broken}, {});
  REQUIRE(v.excluded.size() == 1);
  CHECK(v.excluded[0].exclusion_reason() == "region mismatch (P1)");
}

TEST_CASE("retained and excluded partition the input") {
  auto items = load_stimuli_csv(gbtest::data_path("sample_stimuli.csv"));
  ParadigmTemplate t = gbtest::sample_template(3);
  t.item_id = 4;
  t.island_np = "the CEO of";
  items.push_back(expand_template(t));
  const auto v = validate_items(items, default_verb_blocklist());
  CHECK(v.retained.size() + v.excluded.size() == items.size());
  std::set<int> ids;
  for (const auto& i : v.retained) ids.insert(i.item_id());
  for (const auto& i : v.excluded) ids.insert(i.item_id());
  CHECK(ids.size() == items.size());
}

TEST_CASE("wh pairs follow the test table") {
  const ParadigmItem item = expand_template(gbtest::sample_template(1));
  const WhPair p1 = extract_wh_pair(item, WhTest::P1);
  CHECK(p1.plus_filler.text ==
        "The investigators know who the story about is likely to damage severely.");
  CHECK(p1.minus_filler.text ==
        "The investigators know that the story about is likely to damage severely.");
  const WhPair p4 = extract_wh_pair(item, WhTest::P4);
  CHECK(p4.plus_filler.condition == Condition{true, false, false});
  CHECK(p4.minus_filler.condition == Condition{false, false, false});
  CHECK(label(WhTest::P2) == "P2 (-G1, +G2)");
}

TEST_CASE("the four pairs use each sentence exactly once") {
  for (int id = 1; id <= 3; ++id) {
    const ParadigmItem item = expand_template(gbtest::sample_template(id));
    std::multiset<std::string> used;
    for (WhTest test : kWhTests) {
      const WhPair p = extract_wh_pair(item, test);
      used.insert(p.plus_filler.text);
      used.insert(p.minus_filler.text);
      CHECK(p.plus_filler.region_text == p.minus_filler.region_text);
      // Members differ in exactly one word: filler vs complementizer.
      const auto a = text::split_words(p.plus_filler.text);
      const auto b = text::split_words(p.minus_filler.text);
      REQUIRE(a.size() == b.size());
      int diffs = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].word != b[i].word) {
          ++diffs;
          CHECK(a[i].word == "who");
          CHECK(b[i].word == "that");
        }
      }
      CHECK(diffs == 1);
    }
    CHECK(used.size() == 8);
    CHECK(std::set<std::string>(used.begin(), used.end()).size() == 8);
  }
}

TEST_CASE("DiD quad") {
  const ParadigmItem item = expand_template(gbtest::confound_template());
  const DidQuad q = extract_did_quad(item);
  CHECK(q.plus_gapped.condition == Condition{true, true, true});
  CHECK(q.plus_ungapped.condition == Condition{true, true, false});
  CHECK(q.minus_gapped.condition == Condition{false, false, true});
  CHECK(q.minus_ungapped.condition == Condition{false, false, false});
  CHECK(q.plus_ungapped.region_text == "you");
  CHECK(q.plus_gapped.region_text == "soon");
  CHECK(q.minus_ungapped.region_text == "you");
  CHECK(q.minus_gapped.region_text == "soon");
  CHECK(q.plus_gapped.condition.gap1 == q.plus_ungapped.condition.gap1);
  CHECK(q.minus_gapped.condition.gap1 == q.minus_ungapped.condition.gap1);

  const ParadigmItem item1 = expand_template(gbtest::sample_template(1));
  const DidQuad q1 = extract_did_quad(item1);
  CHECK(q1.plus_ungapped.region_text == "the campaign");
  CHECK(q1.plus_gapped.region_text == "severely");
}

TEST_CASE("verb blocklist file") {
  std::istringstream in("# comment\n\nBelieved\n  doubted  \n");
  const auto b = parse_verb_blocklist(in);
  CHECK(b == VerbBlocklist{"believed", "doubted"});
  CHECK(load_verb_blocklist(gbtest::data_path("blocklist.txt")) == default_verb_blocklist());
}
