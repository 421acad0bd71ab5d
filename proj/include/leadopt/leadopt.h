/* Copyright 2026 The leadopt Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the leadopt library. Objects are opaque handles created by
 * a *_parse / *_load / *_init call and released by the matching *_free.
 * Every fallible call returns a leadopt_status; on failure a message for the
 * calling thread is available from leadopt_last_error().
 *
 * Strings are returned through caller buffers: the call writes at most `cap`
 * bytes including the terminator and stores the full required size (with
 * terminator) in *needed. A short buffer yields LEADOPT_BUFFER_TOO_SMALL.
 */
#ifndef LEADOPT_LEADOPT_H_
#define LEADOPT_LEADOPT_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(LEADOPT_BUILDING)
#define LEADOPT_API __declspec(dllexport)
#else
#define LEADOPT_API __declspec(dllimport)
#endif
#else
#define LEADOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum leadopt_status {
  LEADOPT_OK = 0,
  LEADOPT_SYNTAX_ERROR = 1,
  LEADOPT_UNBALANCED_BRACKET = 2,
  LEADOPT_UNCLOSED_RING = 3,
  LEADOPT_BAD_VALENCE = 4,
  LEADOPT_UNSUPPORTED_ELEMENT = 5,
  LEADOPT_MULTI_FRAGMENT = 6,
  LEADOPT_LENGTH_MISMATCH = 7,
  LEADOPT_BUDGET_EXHAUSTED = 8,
  LEADOPT_UNKNOWN_PROPERTY = 9,
  LEADOPT_PARSE_ERROR = 10,
  LEADOPT_MISSING_KEY = 11,
  LEADOPT_NON_FINITE_SCORE = 12,
  LEADOPT_NO_ANSWER_TAG = 13,
  LEADOPT_NO_LEGAL_EDITS = 14,
  LEADOPT_ILLEGAL_EDIT = 15,
  LEADOPT_EMPTY_AFTER_FILTER = 16,
  LEADOPT_EMPTY_RESULTS = 17,
  LEADOPT_NON_FINITE_GRADIENT = 18,
  LEADOPT_CONFIG_ERROR = 19,
  LEADOPT_IO_ERROR = 20,
  LEADOPT_INVALID_ARGUMENT = 21,
  LEADOPT_BUFFER_TOO_SMALL = 22,
  LEADOPT_INTERNAL_ERROR = 99
} leadopt_status;

typedef struct leadopt_molecule leadopt_molecule;
typedef struct leadopt_config leadopt_config;
typedef struct leadopt_policy leadopt_policy;

/* Receives one JSON record per training iteration or selftest check. */
typedef void (*leadopt_log_fn)(const char* json_line, void* user);

LEADOPT_API const char* leadopt_version(void);
LEADOPT_API const char* leadopt_status_name(leadopt_status status);
/* Message of the last failed call on this thread; "" if none. */
LEADOPT_API const char* leadopt_last_error(void);

/* Molecules */
LEADOPT_API leadopt_status leadopt_molecule_parse(const char* smiles, leadopt_molecule** out);
LEADOPT_API void leadopt_molecule_free(leadopt_molecule* mol);
LEADOPT_API leadopt_status leadopt_molecule_canonical(const leadopt_molecule* mol, char* buf, size_t cap,
                                                      size_t* needed);
LEADOPT_API leadopt_status leadopt_molecule_similarity(const leadopt_molecule* a, const leadopt_molecule* b,
                                                       double* out);
/* Builtin property by name, e.g. "logp_proxy", "qed_proxy", "heavyatoms". */
LEADOPT_API leadopt_status leadopt_molecule_property(const leadopt_molecule* mol, const char* name,
                                                     double* out);

/* Experiment configuration */
LEADOPT_API leadopt_status leadopt_config_load(const char* path, leadopt_config** out);
LEADOPT_API leadopt_status leadopt_config_parse(const char* json_text, leadopt_config** out);
LEADOPT_API void leadopt_config_free(leadopt_config* cfg);
/* "a.b.c=value"; the whole config is re-validated and left unchanged on error. */
LEADOPT_API leadopt_status leadopt_config_set(leadopt_config* cfg, const char* assignment);
LEADOPT_API leadopt_status leadopt_config_to_json(const leadopt_config* cfg, char* buf, size_t cap,
                                                  size_t* needed);

/* Policies */
/* Zero weights (uniform over action classes) or the config's checkpoint. */
LEADOPT_API leadopt_status leadopt_policy_init(const leadopt_config* cfg, leadopt_policy** out);
LEADOPT_API leadopt_status leadopt_policy_load(const char* path, leadopt_policy** out);
LEADOPT_API leadopt_status leadopt_policy_save(const leadopt_policy* policy, const char* path);
LEADOPT_API void leadopt_policy_free(leadopt_policy* policy);

/* Workflows. Output directories are created when missing. */

/* Trains from leadopt_policy_init on the config's training leads; writes
 * checkpoint.json and train_log.jsonl. `out` may be NULL. */
LEADOPT_API leadopt_status leadopt_train(const leadopt_config* cfg, const char* output_dir, leadopt_log_fn log,
                                         void* user, leadopt_policy** out);

/* Optimizes every lead of `leads_path` (one SMILES per line), or the config's
 * held-out leads when NULL; writes results.jsonl, metrics.json and
 * summary.csv. `policy` is ignored by the GA method and may be NULL then. */
LEADOPT_API leadopt_status leadopt_optimize(const leadopt_config* cfg, const leadopt_policy* policy,
                                            const char* leads_path, const char* output_dir);

/* Recomputes metrics of a results file as JSON. When output_dir is not NULL
 * metrics.json and summary.csv are also written there. */
LEADOPT_API leadopt_status leadopt_evaluate(const leadopt_config* cfg, const char* results_path,
                                            const char* output_dir, char* buf, size_t cap, size_t* needed);

/* Success rate against oracle calls, sampled every `step` calls, as CSV. */
LEADOPT_API leadopt_status leadopt_plot_data(const leadopt_config* cfg, const char* results_path, long step,
                                             const char* csv_path);

/* Train, then optimize the held-out leads, all under output_dir (or the
 * config's output when NULL). */
LEADOPT_API leadopt_status leadopt_run(const leadopt_config* cfg, const char* output_dir, leadopt_log_fn log,
                                       void* user);

/* Quick invariant checks over every module. *failures receives the number of
 * failed checks; the call itself succeeds unless a check could not run. */
LEADOPT_API leadopt_status leadopt_selftest(leadopt_log_fn log, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* LEADOPT_LEADOPT_H_ */
