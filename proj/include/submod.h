/* C interface to the submodular minimization library.
 *
 * All functions return a submod_status; results come back through out
 * parameters. Strings returned through char** are owned by the caller and
 * must be released with submod_string_free. Element ids crossing this
 * boundary are 1-based, matching the file formats and JSON reports.
 */
#ifndef SUBMOD_H
#define SUBMOD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SUBMOD_API __declspec(dllexport)
#else
#define SUBMOD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum submod_status {
    SUBMOD_OK = 0,
    SUBMOD_ERR_INVALID_ARGUMENT = 1,
    SUBMOD_ERR_DOMAIN = 2,
    SUBMOD_ERR_CAPACITY = 3,
    SUBMOD_ERR_IO = 4,
    SUBMOD_ERR_PARSE = 5,
    SUBMOD_ERR_INTERNAL = 6
} submod_status;

typedef struct submod_instance submod_instance;

SUBMOD_API const char* submod_status_name(submod_status status);

/* Message for the most recent failure on this thread. */
SUBMOD_API const char* submod_last_error(void);

SUBMOD_API const char* submod_version(void);

/* Instance construction from the JSON spec {"kind","n","params","seed"} or
 * from a file holding either that JSON or a plain `u v w` edge list. */
SUBMOD_API submod_status submod_instance_from_json(const char* json_text, submod_instance** out);
SUBMOD_API submod_status submod_instance_from_file(const char* path, submod_instance** out);
SUBMOD_API void submod_instance_free(submod_instance* inst);

SUBMOD_API int32_t submod_instance_ground_size(const submod_instance* inst);
SUBMOD_API const char* submod_instance_label(const submod_instance* inst);

/* F on an explicit subset (1-based element ids, no duplicates). */
SUBMOD_API submod_status submod_instance_evaluate(const submod_instance* inst,
                                                  const int32_t* elements, int32_t count,
                                                  double* value_out);

/* Exhaustive check for n <= 16, randomized chains above (sample_budget = 0
 * selects 10000). *ok_out = 1 when submodular; otherwise a witness JSON
 * {A, B, i, lhs, rhs} is returned when witness_json_out is non-NULL. */
SUBMOD_API submod_status submod_instance_check_submodular(const submod_instance* inst,
                                                          int64_t sample_budget, int32_t* ok_out,
                                                          char** witness_json_out);

/* Global minimum by exhaustive enumeration (n <= 20): {"set":[...],"value":v}. */
SUBMOD_API submod_status submod_instance_exact_minimum(const submod_instance* inst,
                                                       char** result_json_out);

/* Runs the subgradient descent configured by config_json:
 * {"epsilon":0.2,"mode":"classical|quantum|hybrid|auto","seed":1,
 *  "cost_model":{...},"exact_quantum":false,"overrides":{...}}.
 * The report JSON carries x_bar summary, S_bar, F(S_bar), the bound and the
 * query ledger. */
SUBMOD_API submod_status submod_solve(const submod_instance* inst, const char* config_json,
                                      char** report_json_out);

/* The two-coordinate estimator demonstration; deterministic means plus an
 * empirical cross-check. */
SUBMOD_API submod_status submod_appendix_a_demo(uint64_t seed, char** report_json_out);

/* Side-by-side classical alias sampling and the quantum multi-sampler over
 * an explicit weight vector; reports empirical/exact pmfs, TV distances and
 * charged costs. */
SUBMOD_API submod_status submod_sample_demo(const double* weights, int32_t n, int32_t t,
                                            uint64_t seed, const char* cost_config_json,
                                            char** report_json_out);

/* Property suites; options_json (nullable):
 * {"suites":["lovasz",...],"instances":[spec,...],"seed":1}.
 * Returns {"passed":bool,"results":[{suite,check,passed,detail},...]}. */
SUBMOD_API submod_status submod_validate(const char* options_json, char** table_json_out);

SUBMOD_API void submod_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SUBMOD_H */
