/* spansim: exact desk-scale simulator of span-program query algorithms.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns a status
 * code and leaves a human-readable message in spansim_last_error() (per
 * thread). Input strings are digit strings over {0, ..., q-1}.
 */
#ifndef SPANSIM_H
#define SPANSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPANSIM_API __declspec(dllexport)
#else
#define SPANSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spansim_status {
  SPANSIM_OK = 0,
  SPANSIM_ERROR_INVALID_ARGUMENT = 1,
  SPANSIM_ERROR_INFEASIBLE = 2,
  SPANSIM_ERROR_UNSUPPORTED = 3,
  SPANSIM_ERROR_PARSE = 4,
  SPANSIM_ERROR_IO = 5,
  SPANSIM_ERROR_INTERNAL = 6
} spansim_status;

SPANSIM_API const char* spansim_version(void);
SPANSIM_API const char* spansim_status_name(spansim_status status);
/* Message for the most recent failing call on this thread; empty when the
 * last call succeeded. The pointer stays valid until the next API call on
 * the same thread. */
SPANSIM_API const char* spansim_last_error(void);

typedef struct spansim_graph spansim_graph;
typedef struct spansim_program spansim_program;
typedef struct spansim_cvs spansim_cvs;
typedef struct spansim_evaluator spansim_evaluator;
typedef struct spansim_converter spansim_converter;

/* ---- graphs ---------------------------------------------------------- */

/* edge_endpoints holds edge_count (u, v) pairs: [u0, v0, u1, v1, ...]. */
SPANSIM_API spansim_status spansim_graph_create(int vertices, const int* edge_endpoints,
                                                int edge_count, int s, int t,
                                                spansim_graph** out);
SPANSIM_API spansim_status spansim_graph_from_json_file(const char* path,
                                                        spansim_graph** out);
SPANSIM_API void spansim_graph_destroy(spansim_graph* graph);

/* Effective resistance between the terminals on the subgraph selected by x;
 * +infinity when they are disconnected. */
SPANSIM_API spansim_status spansim_graph_effective_resistance(const spansim_graph* graph,
                                                              const char* x, double* out);

/* ---- span programs --------------------------------------------------- */

SPANSIM_API spansim_status spansim_program_or(int n, spansim_program** out);
SPANSIM_API spansim_status spansim_program_stconn(const spansim_graph* graph,
                                                  spansim_program** out);
SPANSIM_API spansim_status spansim_program_from_json_file(const char* path,
                                                          spansim_program** out);
SPANSIM_API spansim_status spansim_program_to_json_file(const spansim_program* program,
                                                        const char* path);
SPANSIM_API void spansim_program_destroy(spansim_program* program);

SPANSIM_API int spansim_program_input_length(const spansim_program* program);
SPANSIM_API int spansim_program_alphabet_size(const spansim_program* program);
/* Number of strings in [q]^n, or -1 when it exceeds the desk-scale cap. */
SPANSIM_API int spansim_program_input_count(const spansim_program* program);
SPANSIM_API spansim_status spansim_program_input_at(const spansim_program* program, int index,
                                                    char* buffer, size_t buffer_len);

/* Span program deciding the negated function (witness sizes never increase). */
SPANSIM_API spansim_status spansim_program_negate(const spansim_program* program,
                                                  spansim_program** out);
/* Balance the maximum positive/negative witness sizes over all inputs and
 * raise the witness bound to at least one. */
SPANSIM_API spansim_status spansim_program_scale_normalize(const spansim_program* program,
                                                           spansim_program** out);

typedef struct spansim_witness_info {
  int positive; /* 1 when the input has a positive witness */
  double size;
} spansim_witness_info;

SPANSIM_API spansim_status spansim_program_witness(const spansim_program* program,
                                                   const char* x, spansim_witness_info* out);
/* Maximum witness size over all of [q]^n. */
SPANSIM_API spansim_status spansim_program_witness_bound(const spansim_program* program,
                                                         double* out);

/* ---- function evaluation --------------------------------------------- */

/* Precomputes the scaled/normalized program, its negation, and the witness
 * bound; caches per-round analytics across calls. Not safe for concurrent
 * mutation from multiple threads. */
SPANSIM_API spansim_status spansim_evaluator_create(const spansim_program* raw_program,
                                                    spansim_evaluator** out);
SPANSIM_API void spansim_evaluator_destroy(spansim_evaluator* evaluator);

SPANSIM_API double spansim_evaluator_witness_bound(const spansim_evaluator* evaluator);
/* Witness of the scaled program. */
SPANSIM_API spansim_status spansim_evaluator_witness(spansim_evaluator* evaluator,
                                                     const char* x,
                                                     spansim_witness_info* out);

typedef struct spansim_eval_result {
  int output_bit;
  int rounds_used;
  double alpha_final;
  uint64_t queries_total;
  uint64_t queries_check_program;
  uint64_t queries_check_negation;
} spansim_eval_result;

SPANSIM_API spansim_status spansim_evaluator_run(spansim_evaluator* evaluator, const char* x,
                                                 double delta, uint64_t seed,
                                                 spansim_eval_result* out);

typedef struct spansim_lemma6_result {
  double probability;
  int positive_witness;
  double witness_size;
  int applicable;
  int holds;
  double bound;
} spansim_lemma6_result;

/* Phase Checking bounds at the algorithm's precision for one (x, alpha). */
SPANSIM_API spansim_status spansim_evaluator_lemma6(spansim_evaluator* evaluator,
                                                    const char* x, double alpha, double eps,
                                                    spansim_lemma6_result* out);

/* ---- converting vector sets ------------------------------------------ */

/* Function-evaluation instance derived from a span program over all inputs
 * (rho_x = |0>, sigma_x = |f(x)>). Requires orthogonal letter subspaces. */
SPANSIM_API spansim_status spansim_cvs_from_program(const spansim_program* program,
                                                    spansim_cvs** out);
SPANSIM_API spansim_status spansim_cvs_from_json_file(const char* path, spansim_cvs** out);
SPANSIM_API spansim_status spansim_cvs_to_json_file(const spansim_cvs* cvs, const char* path);
SPANSIM_API void spansim_cvs_destroy(spansim_cvs* cvs);

SPANSIM_API spansim_status spansim_cvs_complement(const spansim_cvs* cvs, spansim_cvs** out);
SPANSIM_API spansim_status spansim_cvs_normalize(const spansim_cvs* cvs, spansim_cvs** out);
/* Largest absolute residual of the defining identity over all input pairs. */
SPANSIM_API spansim_status spansim_cvs_validate(const spansim_cvs* cvs, double* max_residual);

SPANSIM_API int spansim_cvs_input_count(const spansim_cvs* cvs);
SPANSIM_API spansim_status spansim_cvs_input_at(const spansim_cvs* cvs, int index,
                                                char* buffer, size_t buffer_len);
SPANSIM_API spansim_status spansim_cvs_witness_sizes(const spansim_cvs* cvs, const char* x,
                                                     double* w_plus, double* w_minus);
SPANSIM_API spansim_status spansim_cvs_witness_bound(const spansim_cvs* cvs, double* out);

/* ---- state conversion ------------------------------------------------- */

SPANSIM_API spansim_status spansim_converter_create(const spansim_cvs* cvs,
                                                    spansim_converter** out);
SPANSIM_API void spansim_converter_destroy(spansim_converter* converter);

typedef struct spansim_convert_result {
  double distance;
  double alpha_stop;
  int used_complement;
  int flagged; /* probing loop exhausted without a trigger */
  int probe_count;
  uint64_t queries_total;
  uint64_t queries_probe_primary;
  uint64_t queries_probe_complement;
  uint64_t queries_reflect;
} spansim_convert_result;

SPANSIM_API spansim_status spansim_converter_run(spansim_converter* converter, const char* x,
                                                 double eps, double p, uint64_t seed,
                                                 spansim_convert_result* out);

typedef struct spansim_lemma_check {
  int applicable;
  int holds;
  double measured;
  double bound;
} spansim_lemma_check;

typedef struct spansim_lemma_suite_result {
  spansim_lemma_check low_phase_mass;
  spansim_lemma_check probe_probability;
  spansim_lemma_check plus_leakage;
  spansim_lemma_check final_distance;
  double w_plus;
  double w_minus;
} spansim_lemma_suite_result;

SPANSIM_API spansim_status spansim_converter_lemma_suite(spansim_converter* converter,
                                                         const char* x, double alpha,
                                                         double eps_hat,
                                                         spansim_lemma_suite_result* out);

/* ---- misc -------------------------------------------------------------- */

/* Largest deviation of <mu_i|nu_j> from q/(2(q-1))(1 - delta_ij) over all
 * i, j for the given alphabet size. */
SPANSIM_API spansim_status spansim_mu_nu_max_residual(int q, double* out);

/* Deterministic seed derivation for (stream, substream) pairs. */
SPANSIM_API uint64_t spansim_mix_seed(uint64_t base, uint64_t a, uint64_t b);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPANSIM_H */
