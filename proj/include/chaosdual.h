/*
 * chaosdual - dual (upper-bound) prices of Bermudan options from martingales
 * built on truncated Wiener chaos expansions.
 *
 * C API over opaque handles. All functions return cd_status; on failure the
 * thread-local message from cd_last_error() describes the problem. Handles
 * are created by cd_* constructors and released with the matching *_free;
 * they are not thread-safe individually, but distinct handles may be used
 * from distinct threads.
 */
#ifndef CHAOSDUAL_H
#define CHAOSDUAL_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cd_status {
    CD_OK = 0,
    CD_ERR_CONFIG = 2,  /* invalid config file, key, value, or precondition */
    CD_ERR_NUMERIC = 3, /* numerical failure during pricing or a determinism violation */
    CD_ERR_IO = 4,      /* file could not be read or written */
    CD_ERR_BADARG = 5   /* null handle or invalid argument at the API boundary */
} cd_status;

typedef struct cd_config cd_config;
typedef struct cd_report cd_report;

/* ---- configuration ----------------------------------------------------- */

/* Parses a sectioned key = value run configuration from a file or a string.
 * Unknown sections or keys are rejected. */
cd_status cd_config_load(const char* path, cd_config** out);
cd_status cd_config_parse(const char* text, cd_config** out);

/* Overrides one field with the same validation as the file, e.g.
 * cd_config_set(cfg, "method.m", "20000"). */
cd_status cd_config_set(cd_config* cfg, const char* dotted_key, const char* value);

void cd_config_free(cd_config* cfg);

/* ---- runs --------------------------------------------------------------- */

/* Prices the configured contract: simulation, payoff evaluation, chaos basis
 * construction, and the dual minimization. The report carries price,
 * std_error, european, iteration counts, timings, and basis_size. */
cd_status cd_run_price(const cd_config* cfg, cd_report** out);

/* Independent reference prices for contracts with an exact 1-D reduction
 * (geometric baskets and single-asset puts): reduced parameters, Bermudan
 * and American binomial-tree prices, European closed form. */
cd_status cd_run_oracle(const cd_config* cfg, cd_report** out);

/* Runs the same pricing at each thread count; fails with CD_ERR_NUMERIC if
 * the prices are not bitwise identical. Reports wall time, speedup, and
 * efficiency per thread count. */
cd_status cd_run_bench(const cd_config* cfg, const int* thread_counts, int count,
                       cd_report** out);

/* Statistical/structural invariant suite; one pass/fail entry per check plus
 * a "passed" summary field. Returns CD_OK even when checks fail - inspect
 * the report. */
cd_status cd_run_check(cd_report** out);

/* ---- reports ------------------------------------------------------------ */

int cd_report_size(const cd_report* rep);
const char* cd_report_key(const cd_report* rep, int index);     /* NULL if out of range */
const char* cd_report_value(const cd_report* rep, int index);   /* NULL if out of range */
const char* cd_report_get(const cd_report* rep, const char* key); /* NULL if absent */

/* Serialized "key = value" lines; the buffer lives as long as the report. */
const char* cd_report_text(const cd_report* rep);

cd_status cd_report_write(const cd_report* rep, const char* path);

void cd_report_free(cd_report* rep);

/* ---- misc ---------------------------------------------------------------- */

/* Number of chaos basis elements for degree cap p on an n-step grid driven by
 * a d-dimensional Brownian motion; 0 with CD_ERR_CONFIG if out of range. */
cd_status cd_basis_size(int p, int n, int d, unsigned long long* out);

/* Message for the most recent failure on this thread; empty string if none. */
const char* cd_last_error(void);

const char* cd_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CHAOSDUAL_H */
