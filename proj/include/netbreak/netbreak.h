#ifndef NETBREAK_NETBREAK_H
#define NETBREAK_NETBREAK_H

/* Stable C interface to the netbreak library. Every function returns an
 * nb_status; on failure nb_last_error() holds a message for the calling
 * thread. Handles are opaque and owned by the caller until destroyed.
 * Output pointers are written only on NB_OK. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NB_BUILDING_LIBRARY)
#    define NB_API __declspec(dllexport)
#  else
#    define NB_API __declspec(dllimport)
#  endif
#else
#  define NB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nb_status {
  NB_OK = 0,
  NB_ERR_INVALID_ARGUMENT = 1,
  NB_ERR_OUT_OF_RANGE = 2,
  NB_ERR_IO = 3,
  NB_ERR_FORMAT = 4,
  NB_ERR_LIMIT = 5,
  NB_ERR_BUFFER_TOO_SMALL = 6,
  NB_ERR_NO_MEMORY = 7,
  NB_ERR_INTERNAL = 8
} nb_status;

typedef enum nb_mode { NB_MODE_EXACT = 0, NB_MODE_LOG = 1 } nb_mode;

typedef enum nb_variant {
  NB_VARIANT_NULL_CONNECTED = 0,
  NB_VARIANT_ALL_BROKEN_IS_BREAKDOWN = 1
} nb_variant;

typedef struct nb_estimate {
  double epsilon;
  double mean;
  double std_error;
  uint64_t breakdowns;
  uint64_t trials;
  uint64_t graph_samples;
  uint64_t trials_per_graph;
  uint64_t seed;
} nb_estimate;

typedef struct nb_bound nb_bound;
typedef struct nb_graph nb_graph;
typedef struct nb_oracle nb_oracle;

/* "major.minor.patch", static storage. */
NB_API const char* nb_version(void);
/* Message of the last failure on this thread; "" if none. */
NB_API const char* nb_last_error(void);
NB_API const char* nb_status_name(nb_status status);

/* ---- bound ----------------------------------------------------------- */

/* Precomputes Q^(U)_j for j = 0..n. threads = 0 uses all cores. */
NB_API nb_status nb_bound_create(int n, int lambda, nb_mode mode, nb_variant variant,
                                 unsigned threads, nb_bound** out);
NB_API void nb_bound_destroy(nb_bound* bound);
/* P^(U)(epsilon), epsilon in [0, 1]. Not clamped; may exceed 1. */
NB_API nb_status nb_bound_p(const nb_bound* bound, double epsilon, double* out);
NB_API nb_status nb_bound_q(const nb_bound* bound, int j, double* out);
/* Exact mode: reduced fraction "p/q" or integer. Log mode: decimal.
 * *needed receives the length including the terminating NUL; with
 * capacity too small the call fails with NB_ERR_BUFFER_TOO_SMALL. */
NB_API nb_status nb_bound_q_string(const nb_bound* bound, int j, char* buf, size_t capacity,
                                   size_t* needed);

/* K(j) / (2 (lambda n)!) == Q^(U)_j in exact arithmetic. */
NB_API nb_status nb_verify_collapse(int n, int lambda, int j, int* holds);
/* two_power_sum(a, b) equals C(a+b, a) for even a+b and 0 otherwise. */
NB_API nb_status nb_two_power_sum_check(int64_t a, int64_t b, int* holds);

/* ---- simulation ------------------------------------------------------ */

/* One estimate per grid point; out has room for count entries. The same
 * o_max graphs are reused across the grid. Output is independent of
 * threads. */
NB_API nb_status nb_simulate(int n, int lambda, const double* epsilons, size_t count,
                             uint64_t o_max, uint64_t i_max, uint64_t seed, unsigned threads,
                             nb_estimate* out);

/* ---- graphs ---------------------------------------------------------- */

/* The graph_index-th ensemble draw of a run with this seed. */
NB_API nb_status nb_graph_sample(int n, int lambda, uint64_t seed, uint64_t graph_index,
                                 nb_graph** out);
NB_API nb_status nb_graph_load(const char* path, nb_graph** out);
NB_API nb_status nb_graph_save(const nb_graph* graph, const char* path);
NB_API void nb_graph_destroy(nb_graph* graph);
/* Edge-list text ("n m" then "u v" lines); buffer protocol as
 * nb_bound_q_string. */
NB_API nb_status nb_graph_to_string(const nb_graph* graph, char* buf, size_t capacity,
                                    size_t* needed);
NB_API nb_status nb_graph_node_count(const nb_graph* graph, int* out);
NB_API nb_status nb_graph_edge_count(const nb_graph* graph, size_t* out);
NB_API nb_status nb_graph_is_separated(const nb_graph* graph, const int* broken, size_t count,
                                       int* separated);
/* counts has room for n + 1 entries. */
NB_API nb_status nb_graph_polynomial(const nb_graph* graph, unsigned threads, uint64_t* counts,
                                     size_t capacity);
/* sum_j counts[j] eps^j (1 - eps)^(n - j) over counts[0..n]. */
NB_API nb_status nb_polynomial_evaluate(const uint64_t* counts, int n, double epsilon, double* out);
NB_API nb_status nb_graph_simulate(const nb_graph* graph, double epsilon, uint64_t trials,
                                   uint64_t seed, unsigned threads, nb_estimate* out);

/* ---- oracle ---------------------------------------------------------- */

/* Enumerates all (lambda n)! permutations; lambda n must be at most 10. */
NB_API nb_status nb_oracle_create(int n, int lambda, unsigned threads, nb_oracle** out);
NB_API void nb_oracle_destroy(nb_oracle* oracle);
NB_API nb_status nb_oracle_q(const nb_oracle* oracle, int j, double* out);
NB_API nb_status nb_oracle_q_string(const nb_oracle* oracle, int j, char* buf, size_t capacity,
                                    size_t* needed);
/* Exact comparison of Q_j against Q^(U)_j. */
NB_API nb_status nb_oracle_dominated(const nb_oracle* oracle, int j, int* dominated);
/* Exact ensemble breakdown probability at the binary value of epsilon. */
NB_API nb_status nb_oracle_curve(const nb_oracle* oracle, double epsilon, double* out);

#ifdef __cplusplus
}
#endif

#endif
