#ifndef MIMISBM_H
#define MIMISBM_H

/* C interface to the mimisbm library.
 *
 * Every object is an opaque handle released by its *_free function (NULL is
 * accepted). Functions return a mimi_status; on failure the message of the
 * last error on the calling thread is available from mimi_last_error(). */

#include <stddef.h>
#include <stdint.h>

#if defined(MIMISBM_BUILDING_LIBRARY)
#define MIMI_API __attribute__((visibility("default")))
#else
#define MIMI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mimi_status {
    MIMI_OK = 0,
    MIMI_ERR_NULL = 1,      /* required pointer argument was NULL */
    MIMI_ERR_DOMAIN = 2,    /* invalid dimensions, probabilities, lengths */
    MIMI_ERR_INDEX = 3,
    MIMI_ERR_SELF_LOOP = 4,
    MIMI_ERR_LINK_MAP = 5,
    MIMI_ERR_PARSE = 6,
    MIMI_ERR_IO = 7,
    MIMI_ERR_NOT_FOUND = 8,
    MIMI_ERR_INTERNAL = 9
} mimi_status;

typedef enum mimi_init { MIMI_INIT_RANDOM = 0, MIMI_INIT_SPECTRAL = 1 } mimi_init;

typedef enum mimi_criterion {
    MIMI_CRITERION_ILVB = 0,
    MIMI_CRITERION_ICL_EXACT = 1,
    MIMI_CRITERION_ICL_VARIATIONAL = 2,
    MIMI_CRITERION_ICL_APPROX = 3
} mimi_criterion;

typedef struct mimi_graph mimi_graph;
typedef struct mimi_partition mimi_partition;
typedef struct mimi_dataset mimi_dataset;
typedef struct mimi_fit mimi_fit;
typedef struct mimi_selection mimi_selection;

typedef struct mimi_sim_config {
    size_t n;
    size_t v;
    size_t k;
    size_t q;
    double p_in;
    double p_out;
    double p_switch;
    uint64_t seed;
} mimi_sim_config;

typedef struct mimi_fit_config {
    double eps;
    size_t max_iter;
    size_t restarts;
    uint64_t seed;
    mimi_init init;
} mimi_fit_config;

MIMI_API const char* mimi_version(void);
MIMI_API const char* mimi_last_error(void);
MIMI_API const char* mimi_status_name(mimi_status status);

/* graphs */
MIMI_API mimi_status mimi_graph_read(const char* path, int symmetrize, mimi_graph** out);
MIMI_API mimi_status mimi_graph_write(const mimi_graph* g, const char* path);
/* edges holds n_edges triples (i, j, layer). */
MIMI_API mimi_status mimi_graph_from_edges(size_t n, size_t v, const size_t* edges, size_t n_edges, mimi_graph** out);
MIMI_API size_t mimi_graph_n(const mimi_graph* g);
MIMI_API size_t mimi_graph_v(const mimi_graph* g);
MIMI_API size_t mimi_graph_edge_count(const mimi_graph* g);
MIMI_API void mimi_graph_free(mimi_graph* g);

/* partitions */
MIMI_API mimi_status mimi_partition_create(const size_t* labels, size_t n, size_t k, mimi_partition** out);
MIMI_API mimi_status mimi_partition_read(const char* path, mimi_partition** out);
MIMI_API mimi_status mimi_partition_write(const mimi_partition* p, const char* path);
MIMI_API size_t mimi_partition_size(const mimi_partition* p);
MIMI_API size_t mimi_partition_k(const mimi_partition* p);
/* Copies up to cap labels into out. */
MIMI_API mimi_status mimi_partition_labels(const mimi_partition* p, size_t* out, size_t cap);
MIMI_API void mimi_partition_free(mimi_partition* p);

MIMI_API mimi_status mimi_ari(const mimi_partition* a, const mimi_partition* b, double* out);

/* simulation */
MIMI_API void mimi_sim_config_default(mimi_sim_config* cfg);
MIMI_API mimi_status mimi_simulate(const mimi_sim_config* cfg, mimi_dataset** out);
MIMI_API const mimi_graph* mimi_dataset_graph(const mimi_dataset* ds);
MIMI_API const mimi_partition* mimi_dataset_z(const mimi_dataset* ds);
MIMI_API const mimi_partition* mimi_dataset_w(const mimi_dataset* ds);
MIMI_API mimi_status mimi_dataset_write_truth(const mimi_dataset* ds, const char* path);
MIMI_API void mimi_dataset_free(mimi_dataset* ds);

/* fitting */
MIMI_API void mimi_fit_config_default(mimi_fit_config* cfg);
MIMI_API mimi_status mimi_fit_run(const mimi_graph* g, size_t k, size_t q, const mimi_fit_config* cfg, mimi_fit** out);
/* NaN for a NULL handle. */
MIMI_API double mimi_fit_elbo(const mimi_fit* f);
MIMI_API size_t mimi_fit_iterations(const mimi_fit* f);
MIMI_API int mimi_fit_converged(const mimi_fit* f);
MIMI_API const mimi_partition* mimi_fit_z_map(const mimi_fit* f);
MIMI_API const mimi_partition* mimi_fit_w_map(const mimi_fit* f);
MIMI_API mimi_status mimi_fit_write_report(const mimi_fit* f, const char* path);
MIMI_API void mimi_fit_free(mimi_fit* f);

/* model selection */
MIMI_API mimi_status mimi_select_run(const mimi_graph* g, size_t k_min, size_t k_max, size_t q_min, size_t q_max,
                                     const mimi_fit_config* cfg, size_t jobs, mimi_selection** out);
/* MIMI_ERR_NOT_FOUND when no cell produced a finite value. */
MIMI_API mimi_status mimi_selection_chosen(const mimi_selection* s, mimi_criterion c, size_t* k, size_t* q);
MIMI_API mimi_status mimi_selection_value(const mimi_selection* s, size_t k, size_t q, mimi_criterion c, double* out);
MIMI_API mimi_status mimi_selection_write_json(const mimi_selection* s, const char* path);
MIMI_API mimi_status mimi_selection_write_csv(const mimi_selection* s, const char* path);
MIMI_API void mimi_selection_free(mimi_selection* s);

#ifdef __cplusplus
}
#endif

#endif
