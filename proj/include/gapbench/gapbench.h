/*
 * gapbench C API.
 *
 * Every fallible call returns a gb_status. On failure the thread-local
 * message from gb_last_error() names the offending item, sentence, or line.
 * Handles are opaque and owned by the caller; release them with the matching
 * *_free function. Strings returned through char** are heap allocated and
 * released with gb_string_free. Handles are immutable after creation and may
 * be shared across threads.
 */
#ifndef GAPBENCH_H
#define GAPBENCH_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(GAPBENCH_BUILDING)
#    define GAPBENCH_API __declspec(dllexport)
#  else
#    define GAPBENCH_API __declspec(dllimport)
#  endif
#else
#  define GAPBENCH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gb_status {
  GB_OK = 0,
  GB_ERR_PARSE = 1,
  GB_ERR_INCOMPLETE_PARADIGM = 2,
  GB_ERR_REGION_MISMATCH = 3,
  GB_ERR_NOT_FOUND = 4,
  GB_ERR_AMBIGUOUS_REGION = 5,
  GB_ERR_COVERAGE_GAP = 6,
  GB_ERR_DOMAIN = 7,
  GB_ERR_FORMAT = 8,
  GB_ERR_PROVIDER = 9,
  GB_ERR_INVALID_INPUT = 10,
  GB_ERR_MISSING_SCORE = 11,
  GB_ERR_INSUFFICIENT_DATA = 12,
  GB_ERR_DEGENERATE_SAMPLE = 13,
  GB_ERR_NO_VALID_ITEMS = 14,
  GB_ERR_IO = 15,
  GB_ERR_INTERNAL = 16
} gb_status;

typedef struct gb_dataset gb_dataset;       /* loaded stimulus paradigms */
typedef struct gb_validation gb_validation; /* retained/excluded split */
typedef struct gb_provider gb_provider;     /* surprisal source */
typedef struct gb_report gb_report;         /* evaluation results */

GAPBENCH_API const char* gb_version(void);
GAPBENCH_API const char* gb_status_name(gb_status status);
/* 0 ok, 2 validation failure, 3 provider failure, 4 internal invariant breach. */
GAPBENCH_API int gb_status_exit_code(gb_status status);
GAPBENCH_API const char* gb_last_error(void);
/* Nonzero when the last failure was a provider error worth retrying. */
GAPBENCH_API int gb_last_error_retryable(void);
GAPBENCH_API void gb_string_free(char* s);

/* ---- paradigms ---------------------------------------------------------- */

/* Expands a template table into a stimuli CSV with region columns. */
GAPBENCH_API gb_status gb_expand_templates(const char* templates_csv, const char* out_csv,
                                           size_t* n_items);

GAPBENCH_API gb_status gb_dataset_load(const char* stimuli_csv, gb_dataset** out);
GAPBENCH_API void gb_dataset_free(gb_dataset* dataset);
GAPBENCH_API size_t gb_dataset_item_count(const gb_dataset* dataset);
GAPBENCH_API const char* gb_dataset_path(const gb_dataset* dataset);

/* blocklist_path may be NULL for the built-in list ("believed"). */
GAPBENCH_API gb_status gb_validate(const gb_dataset* dataset, const char* blocklist_path,
                                   gb_validation** out);
GAPBENCH_API void gb_validation_free(gb_validation* validation);
GAPBENCH_API size_t gb_validation_retained_count(const gb_validation* validation);
GAPBENCH_API size_t gb_validation_excluded_count(const gb_validation* validation);
/* *reason stays valid for the lifetime of the validation handle. */
GAPBENCH_API gb_status gb_validation_excluded_at(const gb_validation* validation, size_t index,
                                                 int* item_id, const char** reason);

/* ---- scoring ------------------------------------------------------------ */

GAPBENCH_API gb_status gb_logprob_to_bits(double logprob_e, double* bits);

/* Precomputed token-score JSONL. */
GAPBENCH_API gb_status gb_provider_open_file(const char* scores_jsonl, gb_provider** out);
/* POST {endpoint}/score client; batch_size 0 means the default of 32. */
GAPBENCH_API gb_status gb_provider_open_http(const char* endpoint, size_t batch_size,
                                             gb_provider** out);
/* Bigram reference model trained on corpus_path (one sentence per line) or,
 * when corpus_path is NULL, on every sentence of corpus_dataset. */
GAPBENCH_API gb_status gb_provider_open_reference(const char* corpus_path,
                                                  const gb_dataset* corpus_dataset,
                                                  double alpha, gb_provider** out);
GAPBENCH_API void gb_provider_free(gb_provider* provider);
/* Writes one JSONL line per sentence of the dataset, canonical order. */
GAPBENCH_API gb_status gb_score_dataset(const gb_provider* provider, const gb_dataset* dataset,
                                        const char* out_jsonl);

/* ---- statistics --------------------------------------------------------- */

GAPBENCH_API gb_status gb_t_sf(double t, double df, double* out);
GAPBENCH_API gb_status gb_t_quantile(double p, double df, double* out);

/* ---- evaluation and reporting ------------------------------------------- */

typedef struct gb_eval_options {
  const char* blocklist_path; /* NULL: built-in list */
  int two_tailed;             /* nonzero: two-tailed headline p-values */
  const char* timestamp;      /* recorded verbatim; NULL: empty */
} gb_eval_options;

GAPBENCH_API gb_status gb_evaluate(const gb_dataset* dataset, const gb_provider* provider,
                                   const gb_eval_options* options, gb_report** out);
GAPBENCH_API gb_status gb_report_load(const char* report_json, gb_report** out);
GAPBENCH_API void gb_report_free(gb_report* report);
GAPBENCH_API gb_status gb_report_to_json(const gb_report* report, char** out);
/* report.json, wh_summary.csv, did_summary.csv, accuracy.csv, per_item.csv,
 * fig1.tsv, fig2.tsv */
GAPBENCH_API gb_status gb_report_write(const gb_report* report, const char* out_dir,
                                       int precision);
/* which: wh_summary | did_summary | per_item | accuracy;
 * format: csv | json | markdown */
GAPBENCH_API gb_status gb_report_table(const gb_report* report, const char* which,
                                       const char* format, int precision, char** out);
/* which: fig1 | fig2 */
GAPBENCH_API gb_status gb_report_plot(const gb_report* report, const char* which, char** out);

typedef struct gb_summary {
  int n;
  int has_stats; /* 0 when the t-test was not computable; see note */
  double mean; /* valid whenever n > 0 */
  double sd;
  double t_stat;
  int df;
  double p_value; /* headline tail */
  double p_two_tailed;
  double ci_lo;
  double ci_hi;
  int has_accuracy;
  double accuracy;
} gb_summary;

/* name: P1 | P2 | P3 | P4 | Delta+ | DiD */
GAPBENCH_API gb_status gb_report_summary(const gb_report* report, const char* name,
                                         gb_summary* out);
GAPBENCH_API double gb_report_lexical_disparity(const gb_report* report);
GAPBENCH_API size_t gb_report_exclusion_count(const gb_report* report);

#ifdef __cplusplus
}
#endif

#endif /* GAPBENCH_H */
