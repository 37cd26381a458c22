#include "gapbench/scoring.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "gapbench/error.hpp"
#include "gapbench/text.hpp"

namespace gapbench {

using json = nlohmann::ordered_json;

double logprob_to_bits(double logprob_e) {
  if (std::isnan(logprob_e) || logprob_e > 0.0) {
    throw Error(ErrorKind::Domain,
                "log probability must be <= 0, got " + std::to_string(logprob_e));
  }
  if (logprob_e == 0.0) return 0.0;
  return -logprob_e / std::numbers::ln2;
}

TokenScore make_token(std::string text, std::size_t char_start, std::size_t char_end,
                      double logprob_e) {
  return TokenScore{std::move(text), char_start, char_end, logprob_e,
                    logprob_to_bits(logprob_e)};
}

namespace {

std::string at_line(std::size_t line) {
  return line ? "line " + std::to_string(line) + ": " : std::string();
}

ScoredSentence sentence_from_json(const json& j, std::size_t line) {
  const std::string where = at_line(line);
  auto fail = [&](const std::string& msg) { return Error(ErrorKind::Format, where + msg); };

  if (!j.is_object()) throw fail("expected a JSON object");
  for (const char* key : {"sentence_id", "text"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw fail(std::string("missing string field '") + key + "'");
    }
  }
  if (!j.contains("tokens") || !j["tokens"].is_array()) {
    throw fail("missing array field 'tokens'");
  }

  ScoredSentence s;
  s.sentence_id = j["sentence_id"].get<std::string>();
  s.text = j["text"].get<std::string>();
  std::size_t index = 0;
  for (const auto& t : j["tokens"]) {
    const std::string tok = "token " + std::to_string(index++) + ": ";
    if (!t.is_object()) throw fail(tok + "expected an object");
    if (!t.contains("text") || !t["text"].is_string()) throw fail(tok + "missing 'text'");
    for (const char* key : {"char_start", "char_end"}) {
      if (!t.contains(key) || !t[key].is_number_unsigned()) {
        throw fail(tok + "'" + key + "' must be a non-negative integer");
      }
    }
    if (!t.contains("logprob_e") || !t["logprob_e"].is_number()) {
      throw fail(tok + "missing numeric 'logprob_e'");
    }
    const double lp = t["logprob_e"].get<double>();
    if (!(lp <= 0.0)) throw fail(tok + "logprob_e must be <= 0, got " + std::to_string(lp));
    s.tokens.push_back(make_token(t["text"].get<std::string>(),
                                  t["char_start"].get<std::size_t>(),
                                  t["char_end"].get<std::size_t>(), lp));
  }
  try {
    check_scored_sentence(s);
  } catch (const Error& e) {
    throw fail(e.what());
  }
  return s;
}

json sentence_to_json(const ScoredSentence& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) {
    tokens.push_back({{"text", t.text},
                      {"char_start", t.char_start},
                      {"char_end", t.char_end},
                      {"logprob_e", t.logprob_e}});
  }
  return {{"sentence_id", s.sentence_id}, {"text", s.text}, {"tokens", std::move(tokens)}};
}

}  // namespace

ScoredSentence parse_wire_sentence(std::string_view json_text, std::size_t line) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, at_line(line) + e.what());
  }
  return sentence_from_json(j, line);
}

std::string format_wire_sentence(const ScoredSentence& s) {
  return sentence_to_json(s).dump();
}

std::vector<ScoredSentence> parse_token_scores(std::istream& in) {
  std::vector<ScoredSentence> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    out.push_back(parse_wire_sentence(line, line_no));
  }
  return out;
}

std::vector<ScoredSentence> load_token_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return parse_token_scores(in);
}

void write_token_scores(std::ostream& out, std::span<const ScoredSentence> sentences) {
  for (const auto& s : sentences) out << format_wire_sentence(s) << '\n';
}

std::vector<ScoredSentence> score_sentences(const SurprisalProvider& provider,
                                            std::span<const std::string> texts) {
  if (texts.empty()) throw Error(ErrorKind::InvalidInput, "no texts to score");
  auto scored = provider.score(texts);
  const std::string name = provider.info().name;
  if (scored.size() != texts.size()) {
    throw Error(ErrorKind::Format, name + " returned " + std::to_string(scored.size()) +
                                       " sentences for " + std::to_string(texts.size()) +
                                       " texts");
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (scored[i].text != texts[i]) {
      throw Error(ErrorKind::Format, name + " result " + std::to_string(i) +
                                         " has text '" + scored[i].text + "', expected '" +
                                         texts[i] + "'");
    }
    check_scored_sentence(scored[i]);
  }
  return scored;
}

// --- file provider ------------------------------------------------------------

FileProvider::FileProvider(std::vector<ScoredSentence> sentences, std::string source)
    : sentences_(std::move(sentences)), source_(std::move(source)) {
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    check_scored_sentence(sentences_[i]);
    const auto [it, inserted] = by_text_.emplace(sentences_[i].text, i);
    if (!inserted && sentences_[it->second].tokens != sentences_[i].tokens) {
      throw Error(ErrorKind::Format, "conflicting scores for text '" + sentences_[i].text +
                                         "' (sentences '" +
                                         sentences_[it->second].sentence_id + "' and '" +
                                         sentences_[i].sentence_id + "')");
    }
  }
}

FileProvider FileProvider::from_path(const std::string& path) {
  return FileProvider(load_token_scores(path), path);
}

ProviderInfo FileProvider::info() const {
  return {"file", source_.empty() ? "precomputed" : source_, true};
}

std::vector<ScoredSentence> FileProvider::score(std::span<const std::string> texts) const {
  std::vector<ScoredSentence> out;
  out.reserve(texts.size());
  std::vector<std::string> missing;
  for (const auto& t : texts) {
    const auto it = by_text_.find(t);
    if (it == by_text_.end()) {
      missing.push_back("'" + t + "'");
      continue;
    }
    out.push_back(sentences_[it->second]);
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::Provider,
                "no scores for " + std::to_string(missing.size()) + " text(s): " +
                    text::join(missing, ", "));
  }
  return out;
}

}  // namespace gapbench
