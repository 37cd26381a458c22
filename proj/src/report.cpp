#include "gapbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "gapbench/csv.hpp"
#include "gapbench/error.hpp"
#include "gapbench/text.hpp"

namespace gapbench {

using json = nlohmann::ordered_json;

std::string_view to_string(Tails t) noexcept {
  return t == Tails::Directional ? "directional" : "two";
}

Tails parse_tails(std::string_view s) {
  if (s == "directional") return Tails::Directional;
  if (s == "two") return Tails::Two;
  throw Error(ErrorKind::InvalidInput, "unknown tails '" + std::string(s) +
                                           "' (expected directional or two)");
}

// --- evaluation ---------------------------------------------------------------

namespace {

void fill_stats(TestSummary& summary, const std::vector<double>& values,
                const std::string& directional_tail, Tails tails) {
  summary.n = static_cast<int>(values.size());
  summary.tail = tails == Tails::Two ? "two" : directional_tail;
  if (!values.empty()) {
    double sum = 0.0;
    for (double v : values) sum += v;
    summary.mean = sum / static_cast<double>(values.size());
  }
  try {
    summary.stats = stats::one_sample_t(values);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData && e.kind() != ErrorKind::DegenerateSample) {
      throw;
    }
    summary.note = e.what();
    return;
  }
  const auto& st = *summary.stats;
  if (summary.tail == "lower") {
    summary.p_value = st.p_lower_tailed;
  } else if (summary.tail == "upper") {
    summary.p_value = st.p_one_tailed;
  } else {
    summary.p_value = st.p_two_tailed;
  }
}

}  // namespace

EvaluationReport run_eval(const std::vector<ParadigmItem>& items,
                          const SurprisalProvider& provider, const EvalOptions& options) {
  const ValidationResult validation = validate_items(items, options.blocklist);
  if (validation.retained.empty()) {
    throw Error(ErrorKind::NoValidItems,
                std::to_string(items.size()) + " item(s) loaded, none passed validation");
  }
  std::vector<ParadigmItem> retained = validation.retained;
  std::stable_sort(retained.begin(), retained.end(),
                   [](const auto& a, const auto& b) { return a.item_id() < b.item_id(); });

  std::vector<std::string> texts;
  std::vector<std::string> ids;
  for (const auto& item : retained) {
    for (const auto& s : item.sentences()) {
      texts.push_back(s.text);
      ids.push_back(s.sentence_id());
    }
  }
  auto scored = score_sentences(provider, texts);
  ScoreIndex index;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    scored[i].sentence_id = ids[i];
    index.insert(std::move(scored[i]));
  }

  // Surface every alignment failure at once rather than the first.
  std::vector<std::string> failures;
  std::optional<ErrorKind> first_kind;
  for (const auto& item : retained) {
    for (const auto& s : item.sentences()) {
      try {
        sentence_region_surprisal(s, index);
      } catch (const Error& e) {
        if (!first_kind) first_kind = e.kind();
        failures.push_back(s.sentence_id() + ": " + e.what());
      }
    }
  }
  if (!failures.empty()) {
    throw Error(*first_kind, std::to_string(failures.size()) + " sentence(s) failed: " +
                                 text::join(failures, "; "));
  }

  EvaluationReport report;
  ProviderInfo info = provider.info();
  report.metadata.provider = info.name;
  report.metadata.model = info.model;
  report.metadata.deterministic = info.deterministic;
  report.metadata.dataset_path = options.dataset_path;
  report.metadata.items_total = static_cast<int>(items.size());
  report.metadata.items_retained = static_cast<int>(retained.size());
  report.metadata.items_excluded = static_cast<int>(validation.excluded.size());
  report.metadata.scored_sentences = static_cast<int>(texts.size());
  report.metadata.tails = std::string(to_string(options.tails));
  report.metadata.timestamp = options.timestamp;

  std::vector<ExclusionRecord> exclusions;
  for (const auto& item : validation.excluded) {
    exclusions.push_back({item.item_id(), item.exclusion_reason()});
  }
  std::stable_sort(exclusions.begin(), exclusions.end(),
                   [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
  report.exclusions = std::move(exclusions);

  std::map<WhTest, std::vector<double>> effects;
  std::vector<double> delta_plus;
  std::vector<double> dids;
  for (const auto& item : retained) {
    for (WhTest test : kWhTests) {
      report.wh_effects.push_back(wh_effect(item, test, index));
      effects[test].push_back(report.wh_effects.back().effect_bits);
    }
    report.did_results.push_back(did(item, index));
    delta_plus.push_back(report.did_results.back().delta_plus);
    dids.push_back(report.did_results.back().did);
  }

  for (WhTest test : kWhTests) {
    TestSummary s;
    s.name = std::string(to_string(test));
    s.label = std::string(label(test));
    std::string tail;
    switch (expected_sign(test)) {
      case ExpectedSign::Negative:
        s.criterion = "<0";
        tail = "lower";
        s.accuracy = accuracy(effects[test], Criterion::Negative);
        break;
      case ExpectedSign::Positive:
        s.criterion = ">0";
        tail = "upper";
        s.accuracy = accuracy(effects[test], Criterion::Positive);
        break;
      case ExpectedSign::Exploratory:
        s.criterion = "exploratory";
        tail = "two";
        break;
    }
    fill_stats(s, effects[test], tail, options.tails);
    report.wh_summary.push_back(std::move(s));
  }

  TestSummary dp;
  dp.name = "Delta+";
  dp.label = "Direct preference";
  dp.criterion = "Δ₊>0";
  dp.accuracy = accuracy(delta_plus, Criterion::Positive);
  fill_stats(dp, delta_plus, "upper", options.tails);
  TestSummary dd;
  dd.name = "DiD";
  dd.label = "DiD";
  dd.criterion = "Δ₊>Δ₋";
  dd.accuracy = accuracy(dids, Criterion::Positive);
  fill_stats(dd, dids, "upper", options.tails);

  report.accuracy.push_back({dp.label, dp.criterion, *dp.accuracy, dp.n});
  report.accuracy.push_back({dd.label, dd.criterion, *dd.accuracy, dd.n});
  report.did_summary = {std::move(dp), std::move(dd)};

  report.lexical_disparity = baseline_lexical_disparity(retained, index);
  return report;
}

// --- JSON ---------------------------------------------------------------------

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json stats_to_json(const std::optional<stats::TTestResult>& st) {
  if (!st) return nullptr;
  return {{"n", st->n},
          {"mean", st->mean},
          {"sd", st->sd},
          {"se", st->se},
          {"t_stat", st->t_stat},
          {"df", st->df},
          {"p_one_tailed", st->p_one_tailed},
          {"p_lower_tailed", st->p_lower_tailed},
          {"p_two_tailed", st->p_two_tailed},
          {"ci95", {st->ci_lo, st->ci_hi}}};
}

json summary_to_json(const TestSummary& s) {
  return {{"name", s.name},         {"label", s.label},
          {"criterion", s.criterion}, {"tail", s.tail},
          {"n", s.n},               {"mean", optional_number(s.mean)},
          {"stats", stats_to_json(s.stats)},
          {"p_value", optional_number(s.p_value)},
          {"accuracy", optional_number(s.accuracy)},
          {"note", s.note}};
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Format, std::string("report lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, std::string("report field '") + key + "': " + e.what());
  }
}

std::optional<double> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<double>(j, key);
}

TestSummary summary_from_json(const json& j) {
  TestSummary s;
  s.name = field<std::string>(j, "name");
  s.label = field<std::string>(j, "label");
  s.criterion = field<std::string>(j, "criterion");
  s.tail = field<std::string>(j, "tail");
  s.n = field<int>(j, "n");
  s.mean = optional_field(j, "mean");
  if (j.contains("stats") && !j.at("stats").is_null()) {
    const json& st = j.at("stats");
    stats::TTestResult r;
    r.n = field<int>(st, "n");
    r.mean = field<double>(st, "mean");
    r.sd = field<double>(st, "sd");
    r.se = field<double>(st, "se");
    r.t_stat = field<double>(st, "t_stat");
    r.df = field<int>(st, "df");
    r.p_one_tailed = field<double>(st, "p_one_tailed");
    r.p_lower_tailed = field<double>(st, "p_lower_tailed");
    r.p_two_tailed = field<double>(st, "p_two_tailed");
    const auto ci = field<std::vector<double>>(st, "ci95");
    if (ci.size() != 2) throw Error(ErrorKind::Format, "ci95 must have two bounds");
    r.ci_lo = ci[0];
    r.ci_hi = ci[1];
    s.stats = r;
  }
  s.p_value = optional_field(j, "p_value");
  s.accuracy = optional_field(j, "accuracy");
  s.note = field<std::string>(j, "note");
  return s;
}

WhTest parse_wh_test(std::string_view s) {
  for (WhTest t : kWhTests) {
    if (to_string(t) == s) return t;
  }
  throw Error(ErrorKind::Format, "unknown test '" + std::string(s) + "'");
}

ExpectedSign parse_expected(std::string_view s) {
  for (auto e : {ExpectedSign::Negative, ExpectedSign::Positive, ExpectedSign::Exploratory}) {
    if (to_string(e) == s) return e;
  }
  throw Error(ErrorKind::Format, "unknown expected sign '" + std::string(s) + "'");
}

}  // namespace

std::string report_to_json(const EvaluationReport& r) {
  const auto& m = r.metadata;
  json j;
  j["metadata"] = {{"tool_version", m.tool_version},
                   {"provider", m.provider},
                   {"model", m.model},
                   {"deterministic", m.deterministic},
                   {"dataset_path", m.dataset_path},
                   {"items_total", m.items_total},
                   {"items_retained", m.items_retained},
                   {"items_excluded", m.items_excluded},
                   {"scored_sentences", m.scored_sentences},
                   {"tails", m.tails},
                   {"timestamp", m.timestamp}};
  j["wh_summary"] = json::array();
  for (const auto& s : r.wh_summary) j["wh_summary"].push_back(summary_to_json(s));
  j["did_summary"] = json::array();
  for (const auto& s : r.did_summary) j["did_summary"].push_back(summary_to_json(s));
  j["wh_effects"] = json::array();
  for (const auto& e : r.wh_effects) {
    j["wh_effects"].push_back({{"item_id", e.item_id},
                               {"test", std::string(to_string(e.test))},
                               {"effect_bits", e.effect_bits},
                               {"plus_region_bits", e.plus_region_bits},
                               {"minus_region_bits", e.minus_region_bits},
                               {"expected_sign", std::string(to_string(e.expected))},
                               {"plus_sentence_id", e.plus_sentence_id},
                               {"minus_sentence_id", e.minus_sentence_id}});
  }
  j["did_results"] = json::array();
  for (const auto& d : r.did_results) {
    j["did_results"].push_back({{"item_id", d.item_id},
                                {"delta_plus", d.delta_plus},
                                {"delta_minus", d.delta_minus},
                                {"did", d.did},
                                {"sentence_ids", d.sentence_ids}});
  }
  j["accuracy"] = json::array();
  for (const auto& a : r.accuracy) {
    j["accuracy"].push_back({{"metric", a.metric},
                             {"criterion", a.criterion},
                             {"accuracy", a.accuracy},
                             {"n", a.n}});
  }
  j["lexical_disparity_bits"] = r.lexical_disparity;
  j["exclusions"] = json::array();
  for (const auto& e : r.exclusions) {
    j["exclusions"].push_back({{"item_id", e.item_id}, {"reason", e.reason}});
  }
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, std::string("report: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Format, "report must be a JSON object");
  EvaluationReport r;
  const json m = field<json>(j, "metadata");
  r.metadata.tool_version = field<std::string>(m, "tool_version");
  r.metadata.provider = field<std::string>(m, "provider");
  r.metadata.model = field<std::string>(m, "model");
  r.metadata.deterministic = field<bool>(m, "deterministic");
  r.metadata.dataset_path = field<std::string>(m, "dataset_path");
  r.metadata.items_total = field<int>(m, "items_total");
  r.metadata.items_retained = field<int>(m, "items_retained");
  r.metadata.items_excluded = field<int>(m, "items_excluded");
  r.metadata.scored_sentences = field<int>(m, "scored_sentences");
  r.metadata.tails = field<std::string>(m, "tails");
  r.metadata.timestamp = field<std::string>(m, "timestamp");

  for (const auto& s : field<json>(j, "wh_summary")) r.wh_summary.push_back(summary_from_json(s));
  for (const auto& s : field<json>(j, "did_summary")) r.did_summary.push_back(summary_from_json(s));
  for (const auto& e : field<json>(j, "wh_effects")) {
    WhEffectResult w;
    w.item_id = field<int>(e, "item_id");
    w.test = parse_wh_test(field<std::string>(e, "test"));
    w.effect_bits = field<double>(e, "effect_bits");
    w.plus_region_bits = field<double>(e, "plus_region_bits");
    w.minus_region_bits = field<double>(e, "minus_region_bits");
    w.expected = parse_expected(field<std::string>(e, "expected_sign"));
    w.plus_sentence_id = field<std::string>(e, "plus_sentence_id");
    w.minus_sentence_id = field<std::string>(e, "minus_sentence_id");
    r.wh_effects.push_back(std::move(w));
  }
  for (const auto& d : field<json>(j, "did_results")) {
    DidResult x;
    x.item_id = field<int>(d, "item_id");
    x.delta_plus = field<double>(d, "delta_plus");
    x.delta_minus = field<double>(d, "delta_minus");
    x.did = field<double>(d, "did");
    x.sentence_ids = field<std::vector<std::string>>(d, "sentence_ids");
    r.did_results.push_back(std::move(x));
  }
  for (const auto& a : field<json>(j, "accuracy")) {
    r.accuracy.push_back({field<std::string>(a, "metric"), field<std::string>(a, "criterion"),
                          field<double>(a, "accuracy"), field<int>(a, "n")});
  }
  r.lexical_disparity = field<double>(j, "lexical_disparity_bits");
  for (const auto& e : field<json>(j, "exclusions")) {
    r.exclusions.push_back({field<int>(e, "item_id"), field<std::string>(e, "reason")});
  }
  return r;
}

EvaluationReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

// --- tables -------------------------------------------------------------------

TableKind parse_table_kind(std::string_view s) {
  if (s == "wh_summary") return TableKind::WhSummary;
  if (s == "did_summary") return TableKind::DidSummary;
  if (s == "per_item") return TableKind::PerItem;
  if (s == "accuracy") return TableKind::Accuracy;
  throw Error(ErrorKind::InvalidInput, "unknown table '" + std::string(s) + "'");
}

TableFormat parse_table_format(std::string_view s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  if (s == "markdown" || s == "md") return TableFormat::Markdown;
  throw Error(ErrorKind::InvalidInput, "unknown format '" + std::string(s) + "'");
}

Figure parse_figure(std::string_view s) {
  if (s == "fig1") return Figure::Fig1;
  if (s == "fig2") return Figure::Fig2;
  throw Error(ErrorKind::InvalidInput, "unknown figure '" + std::string(s) + "'");
}

namespace {

enum class NumberKind { Bits, PValue, Fraction };

struct Number {
  std::optional<double> value;
  NumberKind kind = NumberKind::Bits;
};

using Cell = std::variant<std::string, int, Number>;

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
};

std::string format_p(double p, int precision) {
  const int digits = std::max(4, precision + 2);
  const double floor = std::pow(10.0, -digits);
  if (p < floor) return "<" + text::fixed(floor, digits);
  return text::fixed(p, digits);
}

std::string render_cell(const Cell& cell, int precision) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<int>(&cell)) return std::to_string(*i);
  const auto& n = std::get<Number>(cell);
  if (!n.value) return "NA";
  switch (n.kind) {
    case NumberKind::Bits: return text::fixed(*n.value, precision);
    case NumberKind::PValue: return format_p(*n.value, precision);
    case NumberKind::Fraction: return text::fixed(*n.value, std::max(3, precision + 1));
  }
  return "NA";
}

Number bits(std::optional<double> v) { return {v, NumberKind::Bits}; }

Table build_table(const EvaluationReport& r, TableKind which) {
  Table t;
  auto stat = [](const TestSummary& s, double stats::TTestResult::*member) {
    return s.stats ? std::optional<double>((*s.stats).*member) : std::nullopt;
  };
  switch (which) {
    case TableKind::WhSummary:
      t.headers = {"Hypothesis", "Mean (bits)", "t-statistic", "p-value"};
      for (const auto& s : r.wh_summary) {
        t.rows.push_back({s.label, bits(s.mean),
                          bits(stat(s, &stats::TTestResult::t_stat)),
                          Number{s.p_value, NumberKind::PValue}});
      }
      break;
    case TableKind::DidSummary:
      t.headers = {"Metric", "Criterion", "Mean (bits)", "t-statistic", "p-value", "Accuracy"};
      for (const auto& s : r.did_summary) {
        t.rows.push_back({s.label, s.criterion, bits(s.mean),
                          bits(stat(s, &stats::TTestResult::t_stat)),
                          Number{s.p_value, NumberKind::PValue},
                          Number{s.accuracy, NumberKind::Fraction}});
      }
      break;
    case TableKind::Accuracy:
      t.headers = {"Metric", "Criterion", "Accuracy"};
      for (const auto& a : r.accuracy) {
        t.rows.push_back({a.metric, a.criterion, Number{a.accuracy, NumberKind::Fraction}});
      }
      break;
    case TableKind::PerItem:
      t.headers = {"item_id", "metric", "value_bits", "sentence_ids"};
      for (const auto& e : r.wh_effects) {
        t.rows.push_back({e.item_id, std::string(to_string(e.test)), bits(e.effect_bits),
                          e.plus_sentence_id + ";" + e.minus_sentence_id});
      }
      for (const auto& d : r.did_results) {
        const std::string ids = text::join(d.sentence_ids, ";");
        t.rows.push_back({d.item_id, std::string("Delta+"), bits(d.delta_plus), ids});
        t.rows.push_back({d.item_id, std::string("Delta-"), bits(d.delta_minus), ids});
        t.rows.push_back({d.item_id, std::string("DiD"), bits(d.did), ids});
      }
      break;
  }
  return t;
}

std::string render_markdown(const Table& t, int precision) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    return out + "\n";
  };
  std::string out = line(t.headers);
  out += line(std::vector<std::string>(t.headers.size(), "---"));
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (const auto& c : row) cells.push_back(render_cell(c, precision));
    out += line(cells);
  }
  return out;
}

std::string render_csv(const Table& t, int precision) {
  std::string out = csv::format_row(t.headers) + "\n";
  for (const auto& row : t.rows) {
    csv::Row cells;
    for (const auto& c : row) cells.push_back(render_cell(c, precision));
    out += csv::format_row(cells) + "\n";
  }
  return out;
}

std::string render_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const auto* s = std::get_if<std::string>(&c)) {
        obj[t.headers[i]] = *s;
      } else if (const auto* n = std::get_if<int>(&c)) {
        obj[t.headers[i]] = *n;
      } else {
        obj[t.headers[i]] = optional_number(std::get<Number>(c).value);
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

std::string tsv_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string emit_table(const EvaluationReport& report, TableKind which, TableFormat format,
                       int precision) {
  if (precision < 0 || precision > 12) {
    throw Error(ErrorKind::InvalidInput, "precision must be in [0, 12]");
  }
  const Table t = build_table(report, which);
  switch (format) {
    case TableFormat::Csv: return render_csv(t, precision);
    case TableFormat::Json: return render_json(t);
    case TableFormat::Markdown: return render_markdown(t, precision);
  }
  throw Error(ErrorKind::InvalidInput, "unknown table format");
}

std::string emit_plot_data(const EvaluationReport& report, Figure which) {
  std::string out;
  if (which == Figure::Fig1) {
    out = "metric\tcriterion\taccuracy\n";
    for (const auto& a : report.accuracy) {
      out += a.metric + "\t" + a.criterion + "\t" + tsv_number(a.accuracy) + "\n";
    }
    return out;
  }
  out = "test\tmean\tci_lo\tci_hi\n";
  for (const auto& s : report.wh_summary) {
    std::optional<double> mean, lo, hi;
    mean = s.mean;
    if (s.stats) {
      lo = s.stats->ci_lo;
      hi = s.stats->ci_hi;
    }
    out += s.name + "\t" + tsv_number(mean) + "\t" + tsv_number(lo) + "\t" + tsv_number(hi) +
           "\n";
  }
  return out;
}

void write_report_outputs(const EvaluationReport& report, const std::string& out_dir,
                          int precision) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());

  write_file(dir / "report.json", report_to_json(report));
  write_file(dir / "wh_summary.csv",
             emit_table(report, TableKind::WhSummary, TableFormat::Csv, precision));
  write_file(dir / "did_summary.csv",
             emit_table(report, TableKind::DidSummary, TableFormat::Csv, precision));
  write_file(dir / "accuracy.csv",
             emit_table(report, TableKind::Accuracy, TableFormat::Csv, precision));
  write_file(dir / "per_item.csv",
             emit_table(report, TableKind::PerItem, TableFormat::Csv, precision));
  write_file(dir / "fig1.tsv", emit_plot_data(report, Figure::Fig1));
  write_file(dir / "fig2.tsv", emit_plot_data(report, Figure::Fig2));
}

}  // namespace gapbench
