#ifndef DYNREFL_H
#define DYNREFL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every API call. */
typedef enum {
    DR_OK = 0,
    DR_ERR_INVALID_ARGUMENT = 1,
    DR_ERR_COMPUTE = 2
} dr_status;

/* Library version string, statically allocated. */
const char* dr_version(void);

/* Message of the last failed call on this thread; statically allocated,
 * valid until the next failing call. Empty string when no error occurred. */
const char* dr_last_error(void);

/* Release a string returned through an out-parameter. NULL is a no-op. */
void dr_string_free(char* s);

/* Opaque session handle; caches the symbolic models built so far.
 * A session is not thread-safe; use one per thread. */
typedef struct dr_session dr_session;

dr_session* dr_session_create(void);
void dr_session_free(dr_session* s);

/* JSON array of identity names the verification suite schedules at rank n. */
dr_status dr_list_identities(dr_session* s, int n, char** out_json);

/* Run one named identity at rank n. exact != 0 selects symbolic proof;
 * otherwise `trials` randomized evaluations from `seed`. Returns a JSON
 * array of report objects {identity, anchor, exact, trials, seed, pass,
 * witness?, note}. A failed identity still returns DR_OK; inspect "pass". */
dr_status dr_run_identity(dr_session* s, const char* name, int n, int exact,
                          int trials, uint64_t seed, char** out_json);

/* Run every identity scheduled at rank n; same report format. */
dr_status dr_run_suite(dr_session* s, int n, int exact, int trials,
                       uint64_t seed, char** out_json);

/* Construct an artifact: what is one of "bcd-from-a", "dual", "fuse",
 * "dress", "monodromy", "hamiltonian". params_json is a JSON object of
 * builder parameters (may be NULL or "" for defaults). Constructions are
 * verified symbolically; a failed premise returns DR_ERR_COMPUTE. */
dr_status dr_build(dr_session* s, const char* what, const char* params_json,
                   char** out_json);

/* Numeric zero-mode sweep of the rank-2 relative Hamiltonian.
 * params_json: {k, parity:"sin"|"cos", m1, m2, mu, samples, seed,
 * exponent:"derived"|"paper"}. out_csv gets rows q,value,residual;
 * out_summary_json gets {samples, seed, max_relative_residual, zero_mode}.
 * Either out pointer may be NULL if not wanted. */
dr_status dr_eigen_sweep(dr_session* s, const char* params_json,
                         char** out_csv, char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* DYNREFL_H */
