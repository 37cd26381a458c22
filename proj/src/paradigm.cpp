#include "gapbench/paradigm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "gapbench/alignment.hpp"
#include "gapbench/csv.hpp"
#include "gapbench/error.hpp"
#include "gapbench/text.hpp"

namespace gapbench {

namespace {

std::string at_line(std::size_t line) {
  return line ? " (line " + std::to_string(line) + ")" : std::string();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return in;
}

void skip_bom(std::istream& in) {
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
    if (!(bom[1] == '\xBB' && bom[2] == '\xBF')) {
      throw Error(ErrorKind::Parse, "unexpected bytes at start of file");
    }
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int parse_int(std::string_view field, std::string_view what, std::size_t line) {
  field = text::trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::Parse,
                "invalid " + std::string(what) + " '" + std::string(field) + "'" + at_line(line));
  }
  return value;
}

// Column name -> index, for header rows.
std::map<std::string, std::size_t, std::less<>> index_header(const csv::Row& header) {
  std::map<std::string, std::size_t, std::less<>> cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    cols.emplace(std::string(text::trim(header[i])), i);
  }
  return cols;
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& w : text::split_words(s)) out.emplace_back(w.word);
  return out;
}

// Index of the only differing word, if the two word lists have equal length
// and differ in exactly one position.
std::optional<std::size_t> single_word_diff(const std::vector<std::string>& a,
                                            const std::vector<std::string>& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::optional<std::size_t> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      if (diff) return std::nullopt;
      diff = i;
    }
  }
  return diff;
}

}  // namespace

std::string format_condition_code(Condition c) {
  std::string out;
  out += c.filler ? "plusF" : "minusF";
  out += c.gap1 ? "_plusG1" : "_minusG1";
  out += c.gap2 ? "_plusG2" : "_minusG2";
  return out;
}

Condition parse_condition_code(std::string_view code, std::size_t line) {
  auto fail = [&]() -> Error {
    return Error(ErrorKind::Parse,
                 "malformed condition code '" + std::string(code) + "'" + at_line(line));
  };
  Condition c;
  std::string_view rest = code;
  auto take = [&](bool& flag, std::string_view factor) {
    if (rest.substr(0, 4) == "plus") {
      flag = true;
      rest.remove_prefix(4);
    } else if (rest.substr(0, 5) == "minus") {
      flag = false;
      rest.remove_prefix(5);
    } else {
      throw fail();
    }
    if (rest.substr(0, factor.size()) != factor) throw fail();
    rest.remove_prefix(factor.size());
  };
  take(c.filler, "F_");
  take(c.gap1, "G1_");
  take(c.gap2, "G2");
  if (!rest.empty()) throw fail();
  return c;
}

std::string StimulusSentence::sentence_id() const {
  return std::to_string(item_id) + ":" + format_condition_code(condition);
}

ParadigmItem ParadigmItem::from_sentences(int item_id,
                                          std::vector<StimulusSentence> sentences) {
  const std::string item = "item " + std::to_string(item_id);
  ParadigmItem out;
  out.item_id_ = item_id;
  std::array<bool, kConditionCount> seen{};
  for (auto& s : sentences) {
    if (s.item_id != item_id) {
      throw Error(ErrorKind::IncompleteParadigm,
                  item + ": sentence carries item_id " + std::to_string(s.item_id));
    }
    const std::size_t i = s.condition.index();
    if (seen[i]) {
      throw Error(ErrorKind::IncompleteParadigm,
                  item + ": duplicate condition " + format_condition_code(s.condition));
    }
    seen[i] = true;
    out.sentences_[i] = std::move(s);
  }
  for (std::size_t i = 0; i < kConditionCount; ++i) {
    if (!seen[i]) {
      throw Error(ErrorKind::IncompleteParadigm,
                  item + ": missing condition " +
                      format_condition_code(Condition::from_index(i)));
    }
  }
  return out;
}

ParadigmItem ParadigmItem::with_exclusion(std::string reason) const {
  ParadigmItem copy = *this;
  copy.excluded_ = true;
  copy.exclusion_reason_ = std::move(reason);
  return copy;
}

// --- templates --------------------------------------------------------------

void check_template(const ParadigmTemplate& t) {
  const std::string item = "template for item " + std::to_string(t.item_id);
  if (t.item_id <= 0) throw Error(ErrorKind::InvalidInput, item + ": item_id must be positive");
  const std::pair<const char*, const std::string*> fields[] = {
      {"prefix", &t.prefix},       {"filler_word", &t.filler_word},
      {"comp_word", &t.comp_word}, {"island_np", &t.island_np},
      {"g1_np", &t.g1_np},         {"predicate", &t.predicate},
      {"g2_np", &t.g2_np},         {"continuation", &t.continuation}};
  for (const auto& [name, value] : fields) {
    if (text::trim(*value).empty()) {
      throw Error(ErrorKind::InvalidInput, item + ": empty field " + name);
    }
  }
  const unsigned char last = static_cast<unsigned char>(t.continuation.back());
  if (!std::ispunct(last)) {
    throw Error(ErrorKind::InvalidInput,
                item + ": continuation must end with punctuation");
  }
  if (text::strip_punct(words_of(t.continuation).front()).empty()) {
    throw Error(ErrorKind::InvalidInput,
                item + ": continuation must start with a word");
  }
}

ParadigmItem expand_template(const ParadigmTemplate& t) {
  check_template(t);
  const std::string post_gap(text::strip_punct(words_of(t.continuation).front()));

  std::vector<StimulusSentence> sentences;
  for (std::size_t i = 0; i < kConditionCount; ++i) {
    const Condition c = Condition::from_index(i);
    std::vector<std::string> parts{t.prefix, c.filler ? t.filler_word : t.comp_word,
                                   t.island_np};
    if (!c.gap1) parts.push_back(t.g1_np);
    parts.push_back(t.predicate);
    if (!c.gap2) parts.push_back(t.g2_np);
    parts.push_back(t.continuation);

    StimulusSentence s;
    s.item_id = t.item_id;
    s.sentence_type = t.sentence_type;
    s.condition = c;
    s.text = text::join(parts, " ");
    s.region_text = c.gap2 ? post_gap : t.g2_np;
    sentences.push_back(std::move(s));
  }
  return ParadigmItem::from_sentences(t.item_id, std::move(sentences));
}

std::vector<ParadigmTemplate> parse_templates_csv(std::istream& in) {
  skip_bom(in);
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw Error(ErrorKind::Parse, "template file is empty");
  const auto cols = index_header(*header);
  for (const char* required : {"item_id", "prefix", "island_np", "g1_np", "predicate",
                               "g2_np", "continuation"}) {
    if (!cols.count(required)) {
      throw Error(ErrorKind::Parse, std::string("template header lacks column '") +
                                        required + "'" + at_line(1));
    }
  }

  std::vector<ParadigmTemplate> out;
  while (auto row = reader.next()) {
    if (row->size() == 1 && text::trim((*row)[0]).empty()) continue;
    const std::size_t line = reader.line();
    if (row->size() != header->size()) {
      throw Error(ErrorKind::Parse, "expected " + std::to_string(header->size()) +
                                        " fields, got " + std::to_string(row->size()) +
                                        at_line(line));
    }
    auto get = [&](std::string_view name) -> std::optional<std::string> {
      const auto it = cols.find(name);
      if (it == cols.end()) return std::nullopt;
      std::string v((*row)[it->second]);
      if (text::trim(v).empty()) return std::nullopt;
      return v;
    };
    ParadigmTemplate t;
    t.item_id = parse_int(*get("item_id"), "item_id", line);
    t.sentence_type = get("sentence_type").value_or(t.sentence_type);
    t.prefix = get("prefix").value_or("");
    t.filler_word = get("filler_word").value_or(t.filler_word);
    t.comp_word = get("comp_word").value_or(t.comp_word);
    t.island_np = get("island_np").value_or("");
    t.g1_np = get("g1_np").value_or("");
    t.predicate = get("predicate").value_or("");
    t.g2_np = get("g2_np").value_or("");
    t.continuation = get("continuation").value_or("");
    try {
      check_template(t);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, std::string(e.what()) + at_line(line));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ParadigmTemplate> load_templates_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_templates_csv(in);
}

// --- stimuli ----------------------------------------------------------------

std::vector<ParadigmItem> parse_stimuli_csv(std::istream& in) {
  skip_bom(in);
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw Error(ErrorKind::Parse, "stimuli file is empty");

  const csv::Row base{"sentence_type", "item_id", "condition", "full_sentence"};
  const std::size_t width = header->size();
  bool ok = width >= base.size() && std::equal(base.begin(), base.end(), header->begin());
  const bool has_region = width >= 5;
  if (ok && has_region) ok = (*header)[4] == "critical_region";
  if (ok && width >= 6) ok = (*header)[5] == "region_occurrence";
  if (!ok || width > 6) {
    throw Error(ErrorKind::Parse, "stimuli header must be '" + csv::format_row(base) +
                                      "[,critical_region[,region_occurrence]]', got '" +
                                      csv::format_row(*header) + "'" + at_line(1));
  }

  std::map<int, std::vector<StimulusSentence>> groups;
  while (auto row = reader.next()) {
    if (row->size() == 1 && text::trim((*row)[0]).empty()) continue;
    const std::size_t line = reader.line();
    if (row->size() != width) {
      throw Error(ErrorKind::Parse, "expected " + std::to_string(width) + " fields, got " +
                                        std::to_string(row->size()) + at_line(line));
    }
    StimulusSentence s;
    s.sentence_type = (*row)[0];
    s.item_id = parse_int((*row)[1], "item_id", line);
    if (s.item_id <= 0) {
      throw Error(ErrorKind::Parse, "item_id must be positive" + at_line(line));
    }
    s.condition = parse_condition_code(text::trim((*row)[2]), line);
    s.text = (*row)[3];
    if (text::trim(s.text).empty()) {
      throw Error(ErrorKind::Parse, "empty full_sentence" + at_line(line));
    }
    if (has_region) s.region_text = (*row)[4];
    if (width >= 6 && !text::trim((*row)[5]).empty()) {
      s.region_occurrence = parse_int((*row)[5], "region_occurrence", line);
      if (*s.region_occurrence < 1) {
        throw Error(ErrorKind::Parse, "region_occurrence must be positive" + at_line(line));
      }
    }
    groups[s.item_id].push_back(std::move(s));
  }

  std::vector<ParadigmItem> items;
  for (auto& [id, sentences] : groups) {
    items.push_back(derive_regions(ParadigmItem::from_sentences(id, std::move(sentences))));
  }
  return items;
}

std::vector<ParadigmItem> load_stimuli_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_stimuli_csv(in);
}

std::string format_stimuli_csv(const std::vector<ParadigmItem>& items) {
  std::string out = "sentence_type,item_id,condition,full_sentence,critical_region,"
                    "region_occurrence\n";
  for (const auto& item : items) {
    for (const auto& s : item.sentences()) {
      out += csv::format_row({s.sentence_type, std::to_string(s.item_id),
                              format_condition_code(s.condition), s.text, s.region_text,
                              s.region_occurrence ? std::to_string(*s.region_occurrence)
                                                  : std::string()});
      out += '\n';
    }
  }
  return out;
}

ParadigmItem derive_regions(const ParadigmItem& item) {
  std::vector<StimulusSentence> sentences(item.sentences().begin(), item.sentences().end());
  for (std::size_t i = 0; i < kConditionCount; ++i) {
    Condition gapped = Condition::from_index(i);
    if (!gapped.gap2) continue;
    Condition filled = gapped;
    filled.gap2 = false;
    StimulusSentence& g = sentences[gapped.index()];
    StimulusSentence& f = sentences[filled.index()];
    if (!g.region_text.empty() && !f.region_text.empty()) continue;

    const auto gw = words_of(g.text);
    const auto fw = words_of(f.text);
    if (fw.size() <= gw.size()) continue;
    std::size_t prefix = 0;
    while (prefix < gw.size() && gw[prefix] == fw[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < gw.size() - prefix &&
           gw[gw.size() - 1 - suffix] == fw[fw.size() - 1 - suffix]) {
      ++suffix;
    }
    if (prefix + suffix != gw.size() || suffix == 0) continue;

    if (f.region_text.empty()) {
      std::vector<std::string> inserted(fw.begin() + static_cast<std::ptrdiff_t>(prefix),
                                        fw.end() - static_cast<std::ptrdiff_t>(suffix));
      f.region_text = text::join(inserted, " ");
    }
    if (g.region_text.empty()) {
      g.region_text = std::string(text::strip_punct(gw[prefix]));
    }
  }
  ParadigmItem out = ParadigmItem::from_sentences(item.item_id(), std::move(sentences));
  return item.excluded() ? out.with_exclusion(item.exclusion_reason()) : out;
}

// --- pairs ------------------------------------------------------------------

std::string_view to_string(WhTest t) noexcept {
  switch (t) {
    case WhTest::P1: return "P1";
    case WhTest::P2: return "P2";
    case WhTest::P3: return "P3";
    case WhTest::P4: return "P4";
  }
  return "?";
}

std::string_view label(WhTest t) noexcept {
  switch (t) {
    case WhTest::P1: return "P1 (+G1, +G2)";
    case WhTest::P2: return "P2 (-G1, +G2)";
    case WhTest::P3: return "P3 (+G1, -G2)";
    case WhTest::P4: return "P4 (-G1, -G2)";
  }
  return "?";
}

Condition gap_context(WhTest t) noexcept {
  switch (t) {
    case WhTest::P1: return {true, true, true};
    case WhTest::P2: return {true, false, true};
    case WhTest::P3: return {true, true, false};
    case WhTest::P4: return {true, false, false};
  }
  return {};
}

WhPair extract_wh_pair(const ParadigmItem& item, WhTest test) {
  Condition plus = gap_context(test);
  plus.filler = true;
  Condition minus = plus;
  minus.filler = false;
  WhPair pair{item.at(plus), item.at(minus)};
  if (pair.plus_filler.region_text != pair.minus_filler.region_text) {
    throw Error(ErrorKind::RegionMismatch,
                "item " + std::to_string(item.item_id()) + " test " +
                    std::string(to_string(test)) + ": '" + pair.plus_filler.region_text +
                    "' vs '" + pair.minus_filler.region_text + "'");
  }
  return pair;
}

DidQuad extract_did_quad(const ParadigmItem& item) {
  return DidQuad{item.at({true, true, true}), item.at({true, true, false}),
                 item.at({false, false, true}), item.at({false, false, false})};
}

// --- validation -------------------------------------------------------------

VerbBlocklist default_verb_blocklist() { return {"believed"}; }

VerbBlocklist parse_verb_blocklist(std::istream& in) {
  VerbBlocklist out;
  for (std::string line; std::getline(in, line);) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto word = text::trim(line);
    if (!word.empty()) out.insert(lower(word));
  }
  return out;
}

VerbBlocklist load_verb_blocklist(const std::string& path) {
  auto in = open_input(path);
  return parse_verb_blocklist(in);
}

std::optional<std::string> matrix_verb(const ParadigmItem& item) {
  const auto plus = words_of(item.at({true, true, true}).text);
  const auto minus = words_of(item.at({false, true, true}).text);
  const auto diff = single_word_diff(plus, minus);
  if (!diff || *diff == 0) return std::nullopt;
  return lower(text::strip_punct(plus[*diff - 1]));
}

ValidationResult validate_items(const std::vector<ParadigmItem>& items,
                                const VerbBlocklist& verb_blocklist) {
  auto failure = [&](const ParadigmItem& item) -> std::optional<std::string> {
    for (WhTest test : kWhTests) {
      Condition plus = gap_context(test);
      Condition minus = plus;
      minus.filler = false;
      if (!single_word_diff(words_of(item.at(plus).text), words_of(item.at(minus).text))) {
        return "malformed minimal pair (" + std::string(to_string(test)) + ")";
      }
      if (item.at(plus).region_text != item.at(minus).region_text) {
        return "region mismatch (" + std::string(to_string(test)) + ")";
      }
    }
    const auto verb = matrix_verb(item);
    if (verb && verb_blocklist.count(*verb)) return "anti-rogative verb";

    for (const auto& s : item.sentences()) {
      if (text::trim(s.region_text).empty()) return "region undetermined";
      try {
        locate_region(s.text, s.region_text, s.region_occurrence);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::AmbiguousRegion) return "ambiguous region";
        return "region not found";
      }
    }
    return std::nullopt;
  };

  ValidationResult result;
  for (const auto& item : items) {
    if (item.excluded()) {
      result.excluded.push_back(item);
    } else if (auto reason = failure(item)) {
      result.excluded.push_back(item.with_exclusion(*reason));
    } else {
      result.retained.push_back(item);
    }
  }
  return result;
}

}  // namespace gapbench
