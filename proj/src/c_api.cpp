#include "mimisbm/mimisbm.h"

#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "mimisbm/errors.hpp"
#include "mimisbm/generator.hpp"
#include "mimisbm/inference.hpp"
#include "mimisbm/io.hpp"
#include "mimisbm/metrics.hpp"
#include "mimisbm/selection.hpp"

struct mimi_graph {
    mimisbm::MultilayerGraph graph;
};

struct mimi_partition {
    mimisbm::HardPartition partition;
};

struct mimi_dataset {
    mimisbm::SimulationConfig config;
    mimi_graph graph;
    mimisbm::GroundTruth truth;
    mimi_partition z;
    mimi_partition w;
};

struct mimi_fit {
    mimisbm::FitReport report;
    mimi_partition z;
    mimi_partition w;
};

struct mimi_selection {
    mimisbm::SelectionResult result;
};

namespace {

thread_local std::string last_error;

mimi_status fail(mimi_status status, const char* what) {
    last_error = what;
    return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
mimi_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return MIMI_OK;
    } catch (const mimisbm::ParseError& e) {
        return fail(MIMI_ERR_PARSE, e.what());
    } catch (const mimisbm::IoError& e) {
        return fail(MIMI_ERR_IO, e.what());
    } catch (const mimisbm::IndexError& e) {
        return fail(MIMI_ERR_INDEX, e.what());
    } catch (const mimisbm::SelfLoopError& e) {
        return fail(MIMI_ERR_SELF_LOOP, e.what());
    } catch (const mimisbm::LinkMapError& e) {
        return fail(MIMI_ERR_LINK_MAP, e.what());
    } catch (const mimisbm::DomainError& e) {
        return fail(MIMI_ERR_DOMAIN, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MIMI_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MIMI_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(MIMI_ERR_INTERNAL, "unknown error");
    }
}

mimisbm::FitConfig to_config(const mimi_fit_config* cfg) {
    mimisbm::FitConfig out;
    if (cfg) {
        out.eps = cfg->eps;
        out.max_iter = cfg->max_iter;
        out.n_restarts = cfg->restarts;
        out.seed = cfg->seed;
        out.init = cfg->init == MIMI_INIT_RANDOM ? mimisbm::InitStrategy::random
                                                 : mimisbm::InitStrategy::per_view_spectral;
    }
    return out;
}

}  // namespace

extern "C" {

const char* mimi_version(void) { return "0.1.0"; }

const char* mimi_last_error(void) { return last_error.c_str(); }

const char* mimi_status_name(mimi_status status) {
    switch (status) {
        case MIMI_OK:
            return "ok";
        case MIMI_ERR_NULL:
            return "null argument";
        case MIMI_ERR_DOMAIN:
            return "domain error";
        case MIMI_ERR_INDEX:
            return "index error";
        case MIMI_ERR_SELF_LOOP:
            return "self-loop";
        case MIMI_ERR_LINK_MAP:
            return "link map error";
        case MIMI_ERR_PARSE:
            return "parse error";
        case MIMI_ERR_IO:
            return "i/o error";
        case MIMI_ERR_NOT_FOUND:
            return "not found";
        case MIMI_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

mimi_status mimi_graph_read(const char* path, int symmetrize, mimi_graph** out) {
    if (!path || !out) {
        return fail(MIMI_ERR_NULL, "path and out must not be NULL");
    }
    return guarded([&] { *out = new mimi_graph{mimisbm::io::read_mlg(path, symmetrize != 0)}; });
}

mimi_status mimi_graph_write(const mimi_graph* g, const char* path) {
    if (!g || !path) {
        return fail(MIMI_ERR_NULL, "graph and path must not be NULL");
    }
    return guarded([&] { mimisbm::io::write_mlg(path, g->graph); });
}

mimi_status mimi_graph_from_edges(size_t n, size_t v, const size_t* edges, size_t n_edges, mimi_graph** out) {
    if (!out || (n_edges && !edges)) {
        return fail(MIMI_ERR_NULL, "edges and out must not be NULL");
    }
    return guarded([&] {
        std::vector<mimisbm::Edge> list;
        list.reserve(n_edges);
        for (size_t e = 0; e < n_edges; ++e) {
            list.push_back({edges[3 * e], edges[3 * e + 1], edges[3 * e + 2]});
        }
        *out = new mimi_graph{mimisbm::build_graph(n, v, list)};
    });
}

size_t mimi_graph_n(const mimi_graph* g) { return g ? g->graph.n() : 0; }

size_t mimi_graph_v(const mimi_graph* g) { return g ? g->graph.v() : 0; }

size_t mimi_graph_edge_count(const mimi_graph* g) {
    if (!g) {
        return 0;
    }
    size_t total = 0;
    for (size_t l = 0; l < g->graph.v(); ++l) {
        total += g->graph.edge_count(l);
    }
    return total;
}

void mimi_graph_free(mimi_graph* g) { delete g; }

mimi_status mimi_partition_create(const size_t* labels, size_t n, size_t k, mimi_partition** out) {
    if (!out || (n && !labels)) {
        return fail(MIMI_ERR_NULL, "labels and out must not be NULL");
    }
    return guarded([&] {
        *out = new mimi_partition{mimisbm::HardPartition(std::vector<std::size_t>(labels, labels + n), k)};
    });
}

mimi_status mimi_partition_read(const char* path, mimi_partition** out) {
    if (!path || !out) {
        return fail(MIMI_ERR_NULL, "path and out must not be NULL");
    }
    return guarded([&] { *out = new mimi_partition{mimisbm::io::read_partition(path)}; });
}

mimi_status mimi_partition_write(const mimi_partition* p, const char* path) {
    if (!p || !path) {
        return fail(MIMI_ERR_NULL, "partition and path must not be NULL");
    }
    return guarded([&] { mimisbm::io::write_partition(path, p->partition); });
}

size_t mimi_partition_size(const mimi_partition* p) { return p ? p->partition.size() : 0; }

size_t mimi_partition_k(const mimi_partition* p) { return p ? p->partition.k() : 0; }

mimi_status mimi_partition_labels(const mimi_partition* p, size_t* out, size_t cap) {
    if (!p || (cap && !out)) {
        return fail(MIMI_ERR_NULL, "partition and out must not be NULL");
    }
    const auto labels = p->partition.labels();
    for (size_t i = 0; i < labels.size() && i < cap; ++i) {
        out[i] = labels[i];
    }
    last_error.clear();
    return MIMI_OK;
}

void mimi_partition_free(mimi_partition* p) { delete p; }

mimi_status mimi_ari(const mimi_partition* a, const mimi_partition* b, double* out) {
    if (!a || !b || !out) {
        return fail(MIMI_ERR_NULL, "partitions and out must not be NULL");
    }
    return guarded([&] { *out = mimisbm::ari(a->partition, b->partition); });
}

void mimi_sim_config_default(mimi_sim_config* cfg) {
    if (!cfg) {
        return;
    }
    const mimisbm::SimulationConfig d;
    *cfg = mimi_sim_config{d.n, d.v, d.k, d.q, d.p_in, d.p_out, d.p_switch, d.seed};
}

mimi_status mimi_simulate(const mimi_sim_config* cfg, mimi_dataset** out) {
    if (!cfg || !out) {
        return fail(MIMI_ERR_NULL, "config and out must not be NULL");
    }
    return guarded([&] {
        mimisbm::SimulationConfig sc;
        sc.n = cfg->n;
        sc.v = cfg->v;
        sc.k = cfg->k;
        sc.q = cfg->q;
        sc.p_in = cfg->p_in;
        sc.p_out = cfg->p_out;
        sc.p_switch = cfg->p_switch;
        sc.seed = cfg->seed;
        mimisbm::Dataset ds = mimisbm::generate_dataset(sc);
        auto* handle = new mimi_dataset{sc, {std::move(ds.graph)}, std::move(ds.truth), {}, {}};
        handle->z.partition = handle->truth.z;
        handle->w.partition = handle->truth.w;
        *out = handle;
    });
}

const mimi_graph* mimi_dataset_graph(const mimi_dataset* ds) { return ds ? &ds->graph : nullptr; }

const mimi_partition* mimi_dataset_z(const mimi_dataset* ds) { return ds ? &ds->z : nullptr; }

const mimi_partition* mimi_dataset_w(const mimi_dataset* ds) { return ds ? &ds->w : nullptr; }

mimi_status mimi_dataset_write_truth(const mimi_dataset* ds, const char* path) {
    if (!ds || !path) {
        return fail(MIMI_ERR_NULL, "dataset and path must not be NULL");
    }
    return guarded([&] { mimisbm::io::write_text(path, mimisbm::io::truth_json(ds->config, ds->truth)); });
}

void mimi_dataset_free(mimi_dataset* ds) { delete ds; }

void mimi_fit_config_default(mimi_fit_config* cfg) {
    if (!cfg) {
        return;
    }
    const mimisbm::FitConfig d;
    *cfg = mimi_fit_config{d.eps, d.max_iter, d.n_restarts, d.seed,
                           d.init == mimisbm::InitStrategy::random ? MIMI_INIT_RANDOM : MIMI_INIT_SPECTRAL};
}

mimi_status mimi_fit_run(const mimi_graph* g, size_t k, size_t q, const mimi_fit_config* cfg, mimi_fit** out) {
    if (!g || !out) {
        return fail(MIMI_ERR_NULL, "graph and out must not be NULL");
    }
    return guarded([&] {
        auto report = mimisbm::fit(g->graph, k, q, to_config(cfg));
        auto* handle = new mimi_fit{std::move(report), {}, {}};
        handle->z.partition = handle->report.z_map;
        handle->w.partition = handle->report.w_map;
        *out = handle;
    });
}

double mimi_fit_elbo(const mimi_fit* f) { return f ? f->report.elbo() : std::numeric_limits<double>::quiet_NaN(); }

size_t mimi_fit_iterations(const mimi_fit* f) { return f ? f->report.iterations : 0; }

int mimi_fit_converged(const mimi_fit* f) { return f && f->report.converged ? 1 : 0; }

const mimi_partition* mimi_fit_z_map(const mimi_fit* f) { return f ? &f->z : nullptr; }

const mimi_partition* mimi_fit_w_map(const mimi_fit* f) { return f ? &f->w : nullptr; }

mimi_status mimi_fit_write_report(const mimi_fit* f, const char* path) {
    if (!f || !path) {
        return fail(MIMI_ERR_NULL, "fit and path must not be NULL");
    }
    return guarded([&] { mimisbm::io::write_report(path, f->report); });
}

void mimi_fit_free(mimi_fit* f) { delete f; }

mimi_status mimi_select_run(const mimi_graph* g, size_t k_min, size_t k_max, size_t q_min, size_t q_max,
                            const mimi_fit_config* cfg, size_t jobs, mimi_selection** out) {
    if (!g || !out) {
        return fail(MIMI_ERR_NULL, "graph and out must not be NULL");
    }
    return guarded([&] {
        *out = new mimi_selection{mimisbm::grid_search(g->graph, k_min, k_max, q_min, q_max, to_config(cfg), jobs)};
    });
}

mimi_status mimi_selection_chosen(const mimi_selection* s, mimi_criterion c, size_t* k, size_t* q) {
    if (!s || !k || !q) {
        return fail(MIMI_ERR_NULL, "selection, k and q must not be NULL");
    }
    if (c < MIMI_CRITERION_ILVB || c > MIMI_CRITERION_ICL_APPROX) {
        return fail(MIMI_ERR_DOMAIN, "unknown criterion");
    }
    const auto& choice = s->result.chosen[static_cast<size_t>(c)];
    if (!choice) {
        return fail(MIMI_ERR_NOT_FOUND, "no grid cell produced a finite value");
    }
    *k = choice->k;
    *q = choice->q;
    last_error.clear();
    return MIMI_OK;
}

mimi_status mimi_selection_value(const mimi_selection* s, size_t k, size_t q, mimi_criterion c, double* out) {
    if (!s || !out) {
        return fail(MIMI_ERR_NULL, "selection and out must not be NULL");
    }
    if (c < MIMI_CRITERION_ILVB || c > MIMI_CRITERION_ICL_APPROX) {
        return fail(MIMI_ERR_DOMAIN, "unknown criterion");
    }
    const auto* cell = s->result.cell(k, q);
    if (!cell || !cell->ok) {
        return fail(MIMI_ERR_NOT_FOUND, "no fitted cell at that (k, q)");
    }
    *out = cell->values.get(static_cast<mimisbm::Criterion>(c));
    last_error.clear();
    return MIMI_OK;
}

mimi_status mimi_selection_write_json(const mimi_selection* s, const char* path) {
    if (!s || !path) {
        return fail(MIMI_ERR_NULL, "selection and path must not be NULL");
    }
    return guarded([&] { mimisbm::io::write_report(path, s->result); });
}

mimi_status mimi_selection_write_csv(const mimi_selection* s, const char* path) {
    if (!s || !path) {
        return fail(MIMI_ERR_NULL, "selection and path must not be NULL");
    }
    return guarded([&] { mimisbm::io::write_text(path, mimisbm::io::selection_csv(s->result)); });
}

void mimi_selection_free(mimi_selection* s) { delete s; }

}  // extern "C"
