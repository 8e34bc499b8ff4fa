/*
 * C interface to the projfree Frank-Wolfe toolkit.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a pf_status; on
 * failure pf_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread). Strings returned through char**
 * are heap-allocated and released with pf_string_free.
 */
#ifndef PROJFREE_H
#define PROJFREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define PF_API __declspec(dllexport)
#else
#  define PF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_USAGE = 2,      /* unknown key or name, malformed value, null handle */
  PF_ERR_INFEASIBLE = 3, /* well-formed configuration that cannot run */
  PF_ERR_INTERNAL = 4
} pf_status;

typedef struct pf_spec pf_spec;
typedef struct pf_record pf_record;

typedef struct pf_counters {
  uint64_t sfo;
  uint64_t ifo;
  uint64_t lo;
  uint64_t gap_ifo;
  uint64_t gap_lo;
  uint64_t sfo_equivalent; /* wrappers: B + inner IFO calls, else 0 */
} pf_counters;

typedef struct pf_summary {
  size_t n;
  size_t d;
  size_t T;
  size_t iterations;
  size_t m;
  size_t b;
  size_t B;
  size_t epochs;
  size_t output_index;
  double gamma;
  double mean_gap;
  double final_gap;
  double output_gap;
  double elapsed_ms;
} pf_summary;

typedef struct pf_log_entry {
  size_t step;
  long epoch; /* -1 outside epoch-based solvers */
  double gap;
  double objective;
} pf_log_entry;

PF_API const char* pf_version(void);
PF_API const char* pf_last_error(void);
PF_API void pf_string_free(char* s);

/* Run specification. Keys are the CLI option names without dashes:
 *   algo problem set d n T m b B gamma beta-mode L D delta beta seed
 *   gap-every eval-batch strict timing convex-schedule
 * Flags (strict, timing, convex-schedule) take "0"/"1". */
PF_API pf_status pf_spec_create(pf_spec** out);
PF_API pf_status pf_spec_clone(const pf_spec* spec, pf_spec** out);
PF_API void pf_spec_destroy(pf_spec* spec);
PF_API pf_status pf_spec_set(pf_spec* spec, const char* key, const char* value);

PF_API pf_status pf_run(const pf_spec* spec, pf_record** out);
PF_API void pf_record_destroy(pf_record* rec);
PF_API pf_status pf_record_summary(const pf_record* rec, pf_summary* out);
PF_API pf_status pf_record_counters(const pf_record* rec, pf_counters* out);
PF_API size_t pf_record_log_size(const pf_record* rec);
PF_API pf_status pf_record_log_entry(const pf_record* rec, size_t index,
                                     pf_log_entry* out);
PF_API size_t pf_record_warning_count(const pf_record* rec);
PF_API const char* pf_record_warning(const pf_record* rec, size_t index);
/* Output iterate x_a; writes up to `capacity` coordinates, sets *dim. */
PF_API pf_status pf_record_output(const pf_record* rec, double* coords,
                                  size_t capacity, size_t* dim);
/* Checks the closed-form oracle counts; *ok is 1 or 0. */
PF_API pf_status pf_verify_accounting(const pf_record* rec, int* ok);

/* CSV: header has no trailing newline; rows neither. */
PF_API const char* pf_csv_header(void);
PF_API pf_status pf_record_csv_row(const pf_record* rec, char** out);

/* axis is "T" or "n"; values strictly increasing. Produces the full CSV
 * document (header, rows, "#slope=" line when count >= 2). */
PF_API pf_status pf_sweep(const pf_spec* base, const char* axis,
                          const uint64_t* values, size_t count,
                          uint32_t repeats, uint32_t workers, char** csv_out);

PF_API pf_status pf_fit_rate(const double* x, const double* gap, size_t count,
                             double* slope);

/* Accounting and invariant smoke suite; *passed is 1 or 0. */
PF_API pf_status pf_self_check(int* passed, char** report);

#ifdef __cplusplus
}
#endif

#endif /* PROJFREE_H */
