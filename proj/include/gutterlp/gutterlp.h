/* Public C interface of the gutterlp solver library.
 *
 * Every object is an opaque handle released by its matching *_free function.
 * Functions that can fail return a glp_status; on failure a message is
 * available from glp_last_error() until the next failing call on the same
 * thread. Strings returned through char** out-parameters are heap allocated
 * and must be released with glp_string_free().
 */
#ifndef GUTTERLP_H
#define GUTTERLP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GUTTERLP_BUILDING)
#    define GLP_API __declspec(dllexport)
#  else
#    define GLP_API __declspec(dllimport)
#  endif
#else
#  define GLP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct glp_problem glp_problem;
typedef struct glp_options glp_options;
typedef struct glp_result glp_result;

typedef enum glp_status {
    GLP_OK = 0,
    GLP_ERR_INVALID_ARGUMENT = 1,
    GLP_ERR_SYNTAX = 2,
    GLP_ERR_DIMENSION_MISMATCH = 3,
    GLP_ERR_ZERO_NORMAL = 4,
    GLP_ERR_IO = 5,
    GLP_ERR_SCALE_EXCEEDED = 6,
    GLP_ERR_NO_OBJECTIVE = 7,
    GLP_ERR_DEGENERATE = 8,
    GLP_ERR_INTERNAL = 9
} glp_status;

typedef enum glp_verdict {
    GLP_FEASIBLE = 0,
    GLP_OPTIMAL = 1,
    GLP_INFEASIBLE = 2,
    GLP_UNBOUNDED = 3,
    GLP_STALLED = 4
} glp_verdict;

typedef enum glp_phase {
    GLP_PHASE_FEASIBILITY = 0,
    GLP_PHASE_OPTIMIZE = 1
} glp_phase;

GLP_API const char* glp_last_error(void);
GLP_API const char* glp_version(void);
GLP_API const char* glp_verdict_name(glp_verdict verdict);
GLP_API void glp_string_free(char* text);

/* ---- problems ---------------------------------------------------------- */

GLP_API glp_status glp_problem_parse(const char* text, glp_problem** out);
GLP_API glp_status glp_problem_load(const char* path, glp_problem** out);
GLP_API void glp_problem_free(glp_problem* problem);

GLP_API size_t glp_problem_dimension(const glp_problem* problem);
GLP_API size_t glp_problem_constraint_count(const glp_problem* problem);
GLP_API int glp_problem_has_objective(const glp_problem* problem);

/* Text form accepted by glp_problem_parse. */
GLP_API glp_status glp_problem_serialize(const glp_problem* problem, char** out);

/* *satisfied is set to 1 when x (length n) meets every constraint. */
GLP_API glp_status glp_problem_check_point(const glp_problem* problem, const double* x, size_t n,
                                           double feas_tol, int* satisfied);

/* Replaces the objective with standard normal coefficients drawn from seed. */
GLP_API glp_status glp_problem_set_random_objective(glp_problem* problem, uint64_t seed, int maximize);

/* ---- options ----------------------------------------------------------- */

GLP_API glp_status glp_options_create(glp_options** out);
GLP_API void glp_options_free(glp_options* options);

GLP_API glp_status glp_options_set_epsilon(glp_options* options, double epsilon);
GLP_API glp_status glp_options_set_feas_tol(glp_options* options, double feas_tol);
GLP_API glp_status glp_options_set_geom_tol(glp_options* options, double geom_tol);
/* Outer iteration cap; 0 restores the size-dependent default. */
GLP_API glp_status glp_options_set_max_iter(glp_options* options, size_t max_iter);
GLP_API glp_status glp_options_set_phase(glp_options* options, glp_phase phase);
/* Passing x == NULL clears a previously set start point. */
GLP_API glp_status glp_options_set_start(glp_options* options, const double* x, size_t n);
GLP_API glp_status glp_options_set_record_trace(glp_options* options, int enabled);

/* ---- solving ----------------------------------------------------------- */

GLP_API glp_status glp_solve(const glp_problem* problem, const glp_options* options, glp_result** out);
GLP_API void glp_result_free(glp_result* result);

GLP_API glp_verdict glp_result_verdict(const glp_result* result);
/* Number of coordinates in the returned point, 0 when there is none. */
GLP_API size_t glp_result_point_size(const glp_result* result);
GLP_API glp_status glp_result_point(const glp_result* result, double* buffer, size_t capacity);
/* Returns 1 and writes *value when an objective value is available. */
GLP_API int glp_result_objective(const glp_result* result, double* value);
GLP_API size_t glp_result_iterations(const glp_result* result);
GLP_API double glp_result_epsilon_final(const glp_result* result);

/* Single-line JSON result record. */
GLP_API glp_status glp_result_record_json(const glp_result* result, char** out);
/* One JSON object per line; empty unless tracing was enabled. */
GLP_API glp_status glp_result_trace_jsonl(const glp_result* result, char** out);
/* Requires a 2-dimensional problem. */
GLP_API glp_status glp_result_render_svg(const glp_result* result, const glp_problem* problem, char** out);

/* Replays a JSONL trace against problem. *ok receives 1 when every check
 * passes; report (may be NULL) receives a JSON summary. */
GLP_API glp_status glp_check_trace(const glp_problem* problem, const char* trace_jsonl, int* ok, char** report);

/* ---- instance generation and reference solutions ----------------------- */

GLP_API glp_status glp_generate_feasible(size_t n, size_t m, double slack, uint64_t seed, glp_problem** out,
                                         char** certificate_json);
GLP_API glp_status glp_generate_infeasible(size_t n, size_t m, uint64_t seed, glp_problem** out,
                                           char** certificate_json);

/* Vertex-enumeration reference solve (n <= 8, m <= 20). Writes a JSON record
 * with verdict, point and objective. */
GLP_API glp_status glp_oracle_solve(const glp_problem* problem, char** record_json);

#ifdef __cplusplus
}
#endif

#endif /* GUTTERLP_H */
