#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gapbench/metrics.hpp"
#include "gapbench/paradigm.hpp"
#include "gapbench/scoring.hpp"
#include "gapbench/stats.hpp"

namespace gapbench {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Tails { Directional, Two };

std::string_view to_string(Tails t) noexcept;
Tails parse_tails(std::string_view s);

struct EvalOptions {
  VerbBlocklist blocklist = default_verb_blocklist();
  Tails tails = Tails::Directional;
  std::string dataset_path;
  std::string timestamp;  // recorded verbatim; empty means unset
};

struct TestSummary {
  std::string name;       // P1..P4, Delta+, DiD
  std::string label;      // display name, e.g. "P1 (+G1, +G2)"
  std::string criterion;  // "<0", ">0", "exploratory", "Δ₊>0", "Δ₊>Δ₋"
  std::string tail;       // tail of the headline p-value: lower, upper, two
  int n = 0;
  std::optional<double> mean;  // present whenever n >= 1
  std::optional<stats::TTestResult> stats;
  std::optional<double> p_value;
  std::optional<double> accuracy;
  std::string note;  // why stats are absent

  friend bool operator==(const TestSummary&, const TestSummary&) = default;
};

struct AccuracyRow {
  std::string metric;
  std::string criterion;
  double accuracy = 0.0;
  int n = 0;

  friend bool operator==(const AccuracyRow&, const AccuracyRow&) = default;
};

struct ExclusionRecord {
  int item_id = 0;
  std::string reason;

  friend bool operator==(const ExclusionRecord&, const ExclusionRecord&) = default;
};

struct ReportMetadata {
  std::string tool_version{kVersion};
  std::string provider;
  std::string model;
  bool deterministic = true;
  std::string dataset_path;
  int items_total = 0;
  int items_retained = 0;
  int items_excluded = 0;
  int scored_sentences = 0;
  std::string tails;
  std::string timestamp;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct EvaluationReport {
  ReportMetadata metadata;
  std::vector<TestSummary> wh_summary;   // P1..P4
  std::vector<TestSummary> did_summary;  // Delta+, DiD
  std::vector<WhEffectResult> wh_effects;  // sorted by (item_id, test)
  std::vector<DidResult> did_results;      // sorted by item_id
  std::vector<AccuracyRow> accuracy;
  double lexical_disparity = 0.0;
  std::vector<ExclusionRecord> exclusions;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

// validate -> score -> align -> metrics -> stats. Throws NoValidItems when
// validation leaves nothing; region failures are collected across all
// sentences and reported together.
EvaluationReport run_eval(const std::vector<ParadigmItem>& items,
                          const SurprisalProvider& provider, const EvalOptions& options);

std::string report_to_json(const EvaluationReport& report);
// Throws Format on schema violations.
EvaluationReport report_from_json(std::string_view json_text);
EvaluationReport load_report(const std::string& path);

enum class TableKind { WhSummary, DidSummary, PerItem, Accuracy };
enum class TableFormat { Csv, Json, Markdown };
enum class Figure { Fig1, Fig2 };

// Throw InvalidInput on unknown names.
TableKind parse_table_kind(std::string_view s);
TableFormat parse_table_format(std::string_view s);
Figure parse_figure(std::string_view s);

std::string emit_table(const EvaluationReport& report, TableKind which, TableFormat format,
                       int precision = 2);
// Tab-separated. fig1: metric, criterion, accuracy. fig2: test, mean,
// ci_lo, ci_hi.
std::string emit_plot_data(const EvaluationReport& report, Figure which);

// report.json, wh_summary.csv, did_summary.csv, accuracy.csv, per_item.csv,
// fig1.tsv, fig2.tsv. Creates the directory if needed.
void write_report_outputs(const EvaluationReport& report, const std::string& out_dir,
                          int precision = 2);

}  // namespace gapbench
