#include "gapbench/gapbench.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "gapbench/error.hpp"
#include "gapbench/paradigm.hpp"
#include "gapbench/report.hpp"
#include "gapbench/scoring.hpp"
#include "gapbench/stats.hpp"

struct gb_dataset {
  std::string path;
  std::vector<gapbench::ParadigmItem> items;
};

struct gb_validation {
  gapbench::ValidationResult result;
};

struct gb_provider {
  std::unique_ptr<gapbench::SurprisalProvider> impl;
};

struct gb_report {
  gapbench::EvaluationReport report;
};

namespace {

thread_local std::string g_last_error;
thread_local bool g_last_retryable = false;

gb_status status_for(gapbench::ErrorKind kind) {
  using gapbench::ErrorKind;
  switch (kind) {
    case ErrorKind::Parse: return GB_ERR_PARSE;
    case ErrorKind::IncompleteParadigm: return GB_ERR_INCOMPLETE_PARADIGM;
    case ErrorKind::RegionMismatch: return GB_ERR_REGION_MISMATCH;
    case ErrorKind::NotFound: return GB_ERR_NOT_FOUND;
    case ErrorKind::AmbiguousRegion: return GB_ERR_AMBIGUOUS_REGION;
    case ErrorKind::CoverageGap: return GB_ERR_COVERAGE_GAP;
    case ErrorKind::Domain: return GB_ERR_DOMAIN;
    case ErrorKind::Format: return GB_ERR_FORMAT;
    case ErrorKind::Provider: return GB_ERR_PROVIDER;
    case ErrorKind::InvalidInput: return GB_ERR_INVALID_INPUT;
    case ErrorKind::MissingScore: return GB_ERR_MISSING_SCORE;
    case ErrorKind::InsufficientData: return GB_ERR_INSUFFICIENT_DATA;
    case ErrorKind::DegenerateSample: return GB_ERR_DEGENERATE_SAMPLE;
    case ErrorKind::NoValidItems: return GB_ERR_NO_VALID_ITEMS;
    case ErrorKind::Io: return GB_ERR_IO;
    case ErrorKind::Invariant: return GB_ERR_INTERNAL;
  }
  return GB_ERR_INTERNAL;
}

// Runs fn, translating exceptions into a status and the thread-local message.
template <typename Fn>
gb_status guarded(Fn&& fn) noexcept {
  g_last_error.clear();
  g_last_retryable = false;
  try {
    fn();
    return GB_OK;
  } catch (const gapbench::Error& e) {
    g_last_error = e.what();
    g_last_retryable = e.retryable();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return GB_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) {
    throw gapbench::Error(gapbench::ErrorKind::InvalidInput, std::string(what) + " is NULL");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gapbench::VerbBlocklist blocklist_from(const char* path) {
  return path ? gapbench::load_verb_blocklist(path) : gapbench::default_verb_blocklist();
}

}  // namespace

extern "C" {

const char* gb_version(void) { return gapbench::kVersion.data(); }

const char* gb_status_name(gb_status status) {
  switch (status) {
    case GB_OK: return "OK";
    case GB_ERR_PARSE: return "ParseError";
    case GB_ERR_INCOMPLETE_PARADIGM: return "IncompleteParadigm";
    case GB_ERR_REGION_MISMATCH: return "RegionMismatch";
    case GB_ERR_NOT_FOUND: return "NotFound";
    case GB_ERR_AMBIGUOUS_REGION: return "AmbiguousRegion";
    case GB_ERR_COVERAGE_GAP: return "CoverageGap";
    case GB_ERR_DOMAIN: return "DomainError";
    case GB_ERR_FORMAT: return "FormatError";
    case GB_ERR_PROVIDER: return "ProviderError";
    case GB_ERR_INVALID_INPUT: return "InvalidInput";
    case GB_ERR_MISSING_SCORE: return "MissingScore";
    case GB_ERR_INSUFFICIENT_DATA: return "InsufficientData";
    case GB_ERR_DEGENERATE_SAMPLE: return "DegenerateSample";
    case GB_ERR_NO_VALID_ITEMS: return "NoValidItems";
    case GB_ERR_IO: return "IoError";
    case GB_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

int gb_status_exit_code(gb_status status) {
  switch (status) {
    case GB_OK: return 0;
    case GB_ERR_PARSE:
    case GB_ERR_INCOMPLETE_PARADIGM:
    case GB_ERR_REGION_MISMATCH:
    case GB_ERR_NOT_FOUND:
    case GB_ERR_AMBIGUOUS_REGION:
    case GB_ERR_INVALID_INPUT:
    case GB_ERR_NO_VALID_ITEMS:
    case GB_ERR_IO: return 2;
    case GB_ERR_PROVIDER:
    case GB_ERR_FORMAT:
    case GB_ERR_MISSING_SCORE:
    case GB_ERR_COVERAGE_GAP: return 3;
    default: return 4;
  }
}

const char* gb_last_error(void) { return g_last_error.c_str(); }
int gb_last_error_retryable(void) { return g_last_retryable ? 1 : 0; }
void gb_string_free(char* s) { std::free(s); }

gb_status gb_expand_templates(const char* templates_csv, const char* out_csv,
                              size_t* n_items) {
  return guarded([&] {
    require(templates_csv, "templates_csv");
    require(out_csv, "out_csv");
    std::vector<gapbench::ParadigmItem> items;
    for (const auto& t : gapbench::load_templates_csv(templates_csv)) {
      items.push_back(gapbench::expand_template(t));
    }
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw gapbench::Error(gapbench::ErrorKind::Io,
                                    "cannot write '" + std::string(out_csv) + "'");
    out << gapbench::format_stimuli_csv(items);
    if (n_items) *n_items = items.size();
  });
}

gb_status gb_dataset_load(const char* stimuli_csv, gb_dataset** out) {
  return guarded([&] {
    require(stimuli_csv, "stimuli_csv");
    require(out, "out");
    auto ds = std::make_unique<gb_dataset>();
    ds->path = stimuli_csv;
    ds->items = gapbench::load_stimuli_csv(stimuli_csv);
    *out = ds.release();
  });
}

void gb_dataset_free(gb_dataset* dataset) { delete dataset; }

size_t gb_dataset_item_count(const gb_dataset* dataset) {
  return dataset ? dataset->items.size() : 0;
}

const char* gb_dataset_path(const gb_dataset* dataset) {
  return dataset ? dataset->path.c_str() : "";
}

gb_status gb_validate(const gb_dataset* dataset, const char* blocklist_path,
                      gb_validation** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    auto v = std::make_unique<gb_validation>();
    v->result = gapbench::validate_items(dataset->items, blocklist_from(blocklist_path));
    *out = v.release();
  });
}

void gb_validation_free(gb_validation* validation) { delete validation; }

size_t gb_validation_retained_count(const gb_validation* validation) {
  return validation ? validation->result.retained.size() : 0;
}

size_t gb_validation_excluded_count(const gb_validation* validation) {
  return validation ? validation->result.excluded.size() : 0;
}

gb_status gb_validation_excluded_at(const gb_validation* validation, size_t index,
                                    int* item_id, const char** reason) {
  return guarded([&] {
    require(validation, "validation");
    const auto& excluded = validation->result.excluded;
    if (index >= excluded.size()) {
      throw gapbench::Error(gapbench::ErrorKind::InvalidInput,
                            "exclusion index " + std::to_string(index) + " out of range");
    }
    if (item_id) *item_id = excluded[index].item_id();
    if (reason) *reason = excluded[index].exclusion_reason().c_str();
  });
}

gb_status gb_logprob_to_bits(double logprob_e, double* bits) {
  return guarded([&] {
    require(bits, "bits");
    *bits = gapbench::logprob_to_bits(logprob_e);
  });
}

gb_status gb_provider_open_file(const char* scores_jsonl, gb_provider** out) {
  return guarded([&] {
    require(scores_jsonl, "scores_jsonl");
    require(out, "out");
    auto p = std::make_unique<gb_provider>();
    p->impl = std::make_unique<gapbench::FileProvider>(
        gapbench::FileProvider::from_path(scores_jsonl));
    *out = p.release();
  });
}

gb_status gb_provider_open_http(const char* endpoint, size_t batch_size, gb_provider** out) {
  return guarded([&] {
    require(endpoint, "endpoint");
    require(out, "out");
    gapbench::HttpOptions options;
    if (batch_size) options.batch_size = batch_size;
    auto p = std::make_unique<gb_provider>();
    p->impl = std::make_unique<gapbench::HttpProvider>(endpoint, options);
    *out = p.release();
  });
}

gb_status gb_provider_open_reference(const char* corpus_path, const gb_dataset* corpus_dataset,
                                     double alpha, gb_provider** out) {
  return guarded([&] {
    require(out, "out");
    std::vector<std::string> corpus;
    if (corpus_path) {
      std::ifstream in(corpus_path, std::ios::binary);
      if (!in) throw gapbench::Error(gapbench::ErrorKind::Io,
                                     "cannot open '" + std::string(corpus_path) + "'");
      for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) corpus.push_back(std::move(line));
      }
    } else {
      require(corpus_dataset, "corpus_dataset");
      for (const auto& item : corpus_dataset->items) {
        for (const auto& s : item.sentences()) corpus.push_back(s.text);
      }
    }
    auto p = std::make_unique<gb_provider>();
    p->impl = std::make_unique<gapbench::ReferenceLM>(gapbench::ReferenceLM::train(corpus, alpha));
    *out = p.release();
  });
}

void gb_provider_free(gb_provider* provider) { delete provider; }

gb_status gb_score_dataset(const gb_provider* provider, const gb_dataset* dataset,
                           const char* out_jsonl) {
  return guarded([&] {
    require(provider, "provider");
    require(dataset, "dataset");
    require(out_jsonl, "out_jsonl");
    std::vector<std::string> texts;
    std::vector<std::string> ids;
    for (const auto& item : dataset->items) {
      for (const auto& s : item.sentences()) {
        texts.push_back(s.text);
        ids.push_back(s.sentence_id());
      }
    }
    auto scored = gapbench::score_sentences(*provider->impl, texts);
    for (std::size_t i = 0; i < scored.size(); ++i) scored[i].sentence_id = ids[i];
    std::ofstream out(out_jsonl, std::ios::binary);
    if (!out) throw gapbench::Error(gapbench::ErrorKind::Io,
                                    "cannot write '" + std::string(out_jsonl) + "'");
    gapbench::write_token_scores(out, scored);
  });
}

gb_status gb_t_sf(double t, double df, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = gapbench::stats::t_sf(t, df);
  });
}

gb_status gb_t_quantile(double p, double df, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = gapbench::stats::t_quantile(p, df);
  });
}

gb_status gb_evaluate(const gb_dataset* dataset, const gb_provider* provider,
                      const gb_eval_options* options, gb_report** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(provider, "provider");
    require(out, "out");
    gapbench::EvalOptions opts;
    opts.dataset_path = dataset->path;
    if (options) {
      opts.blocklist = blocklist_from(options->blocklist_path);
      opts.tails = options->two_tailed ? gapbench::Tails::Two : gapbench::Tails::Directional;
      if (options->timestamp) opts.timestamp = options->timestamp;
    }
    auto r = std::make_unique<gb_report>();
    r->report = gapbench::run_eval(dataset->items, *provider->impl, opts);
    *out = r.release();
  });
}

gb_status gb_report_load(const char* report_json, gb_report** out) {
  return guarded([&] {
    require(report_json, "report_json");
    require(out, "out");
    auto r = std::make_unique<gb_report>();
    r->report = gapbench::load_report(report_json);
    *out = r.release();
  });
}

void gb_report_free(gb_report* report) { delete report; }

gb_status gb_report_to_json(const gb_report* report, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = dup_string(gapbench::report_to_json(report->report));
  });
}

gb_status gb_report_write(const gb_report* report, const char* out_dir, int precision) {
  return guarded([&] {
    require(report, "report");
    require(out_dir, "out_dir");
    gapbench::write_report_outputs(report->report, out_dir, precision);
  });
}

gb_status gb_report_table(const gb_report* report, const char* which, const char* format,
                          int precision, char** out) {
  return guarded([&] {
    require(report, "report");
    require(which, "which");
    require(format, "format");
    require(out, "out");
    *out = dup_string(gapbench::emit_table(report->report, gapbench::parse_table_kind(which),
                                           gapbench::parse_table_format(format), precision));
  });
}

gb_status gb_report_plot(const gb_report* report, const char* which, char** out) {
  return guarded([&] {
    require(report, "report");
    require(which, "which");
    require(out, "out");
    *out = dup_string(gapbench::emit_plot_data(report->report, gapbench::parse_figure(which)));
  });
}

gb_status gb_report_summary(const gb_report* report, const char* name, gb_summary* out) {
  return guarded([&] {
    require(report, "report");
    require(name, "name");
    require(out, "out");
    const gapbench::TestSummary* found = nullptr;
    for (const auto* list : {&report->report.wh_summary, &report->report.did_summary}) {
      for (const auto& s : *list) {
        if (s.name == name) found = &s;
      }
    }
    if (!found) {
      throw gapbench::Error(gapbench::ErrorKind::InvalidInput,
                            "no summary named '" + std::string(name) + "'");
    }
    gb_summary s{};
    s.n = found->n;
    s.mean = found->mean.value_or(0.0);
    if (found->stats) {
      s.has_stats = 1;
      s.sd = found->stats->sd;
      s.t_stat = found->stats->t_stat;
      s.df = found->stats->df;
      s.p_two_tailed = found->stats->p_two_tailed;
      s.ci_lo = found->stats->ci_lo;
      s.ci_hi = found->stats->ci_hi;
    }
    s.p_value = found->p_value.value_or(0.0);
    if (found->accuracy) {
      s.has_accuracy = 1;
      s.accuracy = *found->accuracy;
    }
    *out = s;
  });
}

double gb_report_lexical_disparity(const gb_report* report) {
  return report ? report->report.lexical_disparity : 0.0;
}

size_t gb_report_exclusion_count(const gb_report* report) {
  return report ? report->report.exclusions.size() : 0;
}

}  // extern "C"
