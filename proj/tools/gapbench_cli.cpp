// gapbench command-line front end. Talks to the library only through the C
// API in gapbench/gapbench.h.

#include <ctime>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "gapbench/gapbench.h"

namespace {

struct DatasetDeleter {
  void operator()(gb_dataset* p) const { gb_dataset_free(p); }
};
struct ValidationDeleter {
  void operator()(gb_validation* p) const { gb_validation_free(p); }
};
struct ProviderDeleter {
  void operator()(gb_provider* p) const { gb_provider_free(p); }
};
struct ReportDeleter {
  void operator()(gb_report* p) const { gb_report_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { gb_string_free(p); }
};

using Dataset = std::unique_ptr<gb_dataset, DatasetDeleter>;
using Validation = std::unique_ptr<gb_validation, ValidationDeleter>;
using Provider = std::unique_ptr<gb_provider, ProviderDeleter>;
using Report = std::unique_ptr<gb_report, ReportDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Carries a failed status up to main.
struct Failure {
  gb_status status;
};

void check(gb_status status, const std::string& context) {
  if (status == GB_OK) return;
  std::cerr << "gapbench: " << context << ": " << gb_last_error() << "\n";
  if (status == GB_ERR_PROVIDER && gb_last_error_retryable()) {
    std::cerr << "gapbench: the provider failure is transient; retrying may succeed\n";
  }
  throw Failure{status};
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ProviderFlags {
  std::string kind = "reference";
  std::string scores;
  std::string endpoint;
  std::string corpus;
  double alpha = 1.0;
  std::size_t batch_size = 32;
};

void add_provider_flags(CLI::App* cmd, ProviderFlags& f) {
  cmd->add_option("--provider", f.kind, "Surprisal source")
      ->check(CLI::IsMember({"file", "http", "reference"}))
      ->capture_default_str();
  cmd->add_option("--scores", f.scores, "Token-score JSONL (implies --provider file)");
  cmd->add_option("--endpoint", f.endpoint, "Scoring service base URL")
      ->envname("GAPBENCH_ENDPOINT");
  cmd->add_option("--corpus", f.corpus,
                  "Training text for the reference model (default: the stimuli)");
  cmd->add_option("--alpha", f.alpha, "Reference model smoothing constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--batch-size", f.batch_size, "HTTP batch size")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
}

Provider open_provider(const ProviderFlags& f, const gb_dataset* dataset) {
  gb_provider* raw = nullptr;
  std::string kind = f.scores.empty() ? f.kind : "file";
  if (kind == "file") {
    if (f.scores.empty()) {
      std::cerr << "gapbench: --provider file requires --scores\n";
      throw Failure{GB_ERR_INVALID_INPUT};
    }
    check(gb_provider_open_file(f.scores.c_str(), &raw), "loading " + f.scores);
  } else if (kind == "http") {
    if (f.endpoint.empty()) {
      std::cerr << "gapbench: --provider http requires --endpoint or GAPBENCH_ENDPOINT\n";
      throw Failure{GB_ERR_INVALID_INPUT};
    }
    check(gb_provider_open_http(f.endpoint.c_str(), f.batch_size, &raw),
          "connecting to " + f.endpoint);
  } else {
    check(gb_provider_open_reference(f.corpus.empty() ? nullptr : f.corpus.c_str(), dataset,
                                     f.alpha, &raw),
          "training reference model");
  }
  return Provider(raw);
}

Dataset load_dataset(const std::string& path) {
  gb_dataset* raw = nullptr;
  check(gb_dataset_load(path.c_str(), &raw), "loading " + path);
  return Dataset(raw);
}

void print_table(const gb_report* report, const std::string& which, const std::string& format,
                 int precision) {
  char* raw = nullptr;
  check(gb_report_table(report, which.c_str(), format.c_str(), precision, &raw),
        "rendering " + which);
  OwnedString text(raw);
  std::cout << text.get();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surprisal-based filler-gap evaluation (wh-effects, delta, DiD)"};
  app.set_config("--config", "", "TOML/INI file with default flag values; flags win");
  app.require_subcommand(1);
  app.set_version_flag("--version", gb_version());

  // expand
  std::string templates, expand_out;
  auto* expand = app.add_subcommand("expand", "Expand item templates into a stimuli CSV");
  expand->add_option("--templates", templates, "Template CSV")->required()->check(CLI::ExistingFile);
  expand->add_option("--out", expand_out, "Output stimuli CSV")->required();

  // validate
  std::string stimuli, blocklist;
  auto* validate = app.add_subcommand("validate", "Check paradigms and list exclusions");
  validate->add_option("--stimuli", stimuli, "Stimuli CSV")->required()->check(CLI::ExistingFile);
  validate->add_option("--blocklist", blocklist, "Anti-rogative verb list")->check(CLI::ExistingFile);

  // score
  ProviderFlags score_flags;
  std::string score_out;
  auto* score = app.add_subcommand("score", "Score every stimulus sentence to JSONL");
  score->add_option("--stimuli", stimuli, "Stimuli CSV")->required()->check(CLI::ExistingFile);
  score->add_option("--out", score_out, "Output JSONL")->required();
  add_provider_flags(score, score_flags);

  // eval
  ProviderFlags eval_flags;
  std::string out_dir, tails = "directional", format = "markdown", timestamp;
  int precision = 2;
  auto* eval = app.add_subcommand("eval", "Run the full evaluation and write the report");
  eval->add_option("--stimuli", stimuli, "Stimuli CSV")->required()->check(CLI::ExistingFile);
  add_provider_flags(eval, eval_flags);
  eval->add_option("--blocklist", blocklist, "Anti-rogative verb list")->check(CLI::ExistingFile);
  eval->add_option("--tails", tails, "Headline p-value convention")
      ->check(CLI::IsMember({"directional", "two"}))
      ->capture_default_str();
  eval->add_option("--precision", precision, "Decimals in tables")->check(CLI::Range(0, 12))
      ->capture_default_str();
  eval->add_option("--out-dir", out_dir, "Directory for report.json and tables");
  eval->add_option("--format", format, "Format of the summary printed to stdout")
      ->check(CLI::IsMember({"csv", "json", "markdown"}))
      ->capture_default_str();
  eval->add_option("--timestamp", timestamp, "Timestamp recorded in the report (default: now)");

  // report
  std::string report_path, table, plot;
  auto* report = app.add_subcommand("report", "Render tables or plot data from report.json");
  report->add_option("--report", report_path, "report.json")->required()->check(CLI::ExistingFile);
  auto* table_opt = report->add_option("--table", table, "wh_summary|did_summary|per_item|accuracy")
                        ->check(CLI::IsMember({"wh_summary", "did_summary", "per_item", "accuracy"}));
  report->add_option("--plot", plot, "fig1|fig2")
      ->check(CLI::IsMember({"fig1", "fig2"}))
      ->excludes(table_opt);
  report->add_option("--format", format, "csv|json|markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown"}))
      ->capture_default_str();
  report->add_option("--precision", precision, "Decimals")->check(CLI::Range(0, 12))
      ->capture_default_str();
  report->add_option("--out-dir", out_dir, "Rewrite every output file into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*expand) {
      std::size_t n = 0;
      check(gb_expand_templates(templates.c_str(), expand_out.c_str(), &n),
            "expanding " + templates);
      std::cout << "wrote " << n << " item(s), " << n * 8 << " sentence(s) to " << expand_out
                << "\n";
    } else if (*validate) {
      Dataset ds = load_dataset(stimuli);
      gb_validation* raw = nullptr;
      check(gb_validate(ds.get(), blocklist.empty() ? nullptr : blocklist.c_str(), &raw),
            "validating");
      Validation v(raw);
      const std::size_t retained = gb_validation_retained_count(v.get());
      std::cout << "items: " << gb_dataset_item_count(ds.get()) << ", retained: " << retained
                << ", excluded: " << gb_validation_excluded_count(v.get()) << "\n";
      for (std::size_t i = 0; i < gb_validation_excluded_count(v.get()); ++i) {
        int id = 0;
        const char* reason = nullptr;
        check(gb_validation_excluded_at(v.get(), i, &id, &reason), "reading exclusions");
        std::cout << "  excluded item " << id << ": " << reason << "\n";
      }
      if (retained == 0) return gb_status_exit_code(GB_ERR_NO_VALID_ITEMS);
    } else if (*score) {
      Dataset ds = load_dataset(stimuli);
      Provider p = open_provider(score_flags, ds.get());
      check(gb_score_dataset(p.get(), ds.get(), score_out.c_str()), "scoring");
      std::cout << "wrote " << gb_dataset_item_count(ds.get()) * 8 << " scored sentence(s) to "
                << score_out << "\n";
    } else if (*eval) {
      Dataset ds = load_dataset(stimuli);
      Provider p = open_provider(eval_flags, ds.get());
      const std::string stamp = timestamp.empty() ? utc_now() : timestamp;
      gb_eval_options opts{blocklist.empty() ? nullptr : blocklist.c_str(), tails == "two",
                           stamp.c_str()};
      gb_report* raw = nullptr;
      check(gb_evaluate(ds.get(), p.get(), &opts, &raw), "evaluating");
      Report r(raw);
      if (!out_dir.empty()) {
        check(gb_report_write(r.get(), out_dir.c_str(), precision), "writing " + out_dir);
      }
      print_table(r.get(), "wh_summary", format, precision);
      std::cout << "\n";
      print_table(r.get(), "did_summary", format, precision);
      std::cout << "\nlexical disparity (bits): " << gb_report_lexical_disparity(r.get())
                << "\nexcluded items: " << gb_report_exclusion_count(r.get()) << "\n";
    } else if (*report) {
      gb_report* raw = nullptr;
      check(gb_report_load(report_path.c_str(), &raw), "loading " + report_path);
      Report r(raw);
      if (!out_dir.empty()) {
        check(gb_report_write(r.get(), out_dir.c_str(), precision), "writing " + out_dir);
      }
      if (!plot.empty()) {
        char* text = nullptr;
        check(gb_report_plot(r.get(), plot.c_str(), &text), "rendering " + plot);
        OwnedString owned(text);
        std::cout << owned.get();
      } else {
        print_table(r.get(), table.empty() ? "wh_summary" : table, format, precision);
      }
    }
  } catch (const Failure& f) {
    return gb_status_exit_code(f.status);
  }
  return 0;
}
