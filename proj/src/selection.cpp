#include "mimisbm/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "mimisbm/metrics.hpp"

namespace mimisbm {

std::string_view criterion_name(Criterion c) {
    switch (c) {
        case Criterion::ilvb:
            return "ilvb";
        case Criterion::icl_exact:
            return "icl_exact";
        case Criterion::icl_variational:
            return "icl_variational";
        case Criterion::icl_approx:
            return "icl_approx";
    }
    return "unknown";
}

double ilvb(const VariationalState& state, const PriorHyperparams& priors) { return compute_elbo(state, priors); }

VariationalState hardened_state(const PreparedGraph& g, const HardPartition& z, const HardPartition& w,
                                const PriorHyperparams& priors) {
    if (z.size() != g.n() || w.size() != g.v()) {
        throw DomainError("partition sizes do not match the graph");
    }
    if (z.k() != priors.k() || w.k() != priors.q()) {
        throw DomainError("partition cluster counts do not match the priors");
    }
    VariationalState state;
    state.tau = z.indicator();
    state.nu = w.indicator();
    m_step(g, state, priors);
    return state;
}

double icl_exact(const PreparedGraph& g, const HardPartition& z, const HardPartition& w,
                 const PriorHyperparams& priors) {
    return gamma_ratio_terms(hardened_state(g, z, w, priors), priors);
}

double icl_exact(const MultilayerGraph& g, const HardPartition& z, const HardPartition& w,
                 const PriorHyperparams& priors) {
    return icl_exact(PreparedGraph(g), z, w, priors);
}

double icl_variational(const VariationalState& state, const PriorHyperparams& priors) {
    return gamma_ratio_terms(state, priors);
}

double icl_penalty(std::size_t k, std::size_t q, std::size_t n, std::size_t v) {
    const double kd = static_cast<double>(k);
    const double qd = static_cast<double>(q);
    const double dyads = static_cast<double>(v) * static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    const double alpha_term = dyads > 0.0 ? 0.5 * kd * (kd + 1.0) / 2.0 * qd * std::log(dyads) : 0.0;
    return alpha_term + 0.5 * (kd - 1.0) * std::log(static_cast<double>(n)) +
           0.5 * (qd - 1.0) * std::log(static_cast<double>(v));
}

double icl_approx(double elbo, std::size_t k, std::size_t q, std::size_t n, std::size_t v) {
    return elbo - icl_penalty(k, q, n, v);
}

double CriterionValues::get(Criterion c) const noexcept {
    switch (c) {
        case Criterion::ilvb:
            return ilvb;
        case Criterion::icl_exact:
            return icl_exact;
        case Criterion::icl_variational:
            return icl_variational;
        case Criterion::icl_approx:
            return icl_approx;
    }
    return 0.0;
}

CriterionValues evaluate_criteria(const PreparedGraph& g, const FitReport& report, const PriorHyperparams& priors) {
    CriterionValues out;
    out.ilvb = ilvb(report.state, priors);
    out.icl_exact = icl_exact(g, report.z_map, report.w_map, priors);
    out.icl_variational = icl_variational(report.state, priors);
    out.icl_approx = icl_approx(out.ilvb, report.state.k(), report.state.q(), g.n(), g.v());
    return out;
}

const SelectionCell* SelectionResult::cell(std::size_t k, std::size_t q) const {
    for (const auto& c : cells) {
        if (c.k == k && c.q == q) {
            return &c;
        }
    }
    return nullptr;
}

std::optional<GridChoice> choose(const std::vector<SelectionCell>& cells, Criterion c) {
    std::optional<GridChoice> best;
    double best_value = 0.0;
    const SelectionCell* best_cell = nullptr;
    for (const auto& cell : cells) {
        const double value = cell.values.get(c);
        if (!cell.ok || !std::isfinite(value)) {
            continue;
        }
        const bool smaller_index =
            best_cell && (cell.k < best_cell->k || (cell.k == best_cell->k && cell.q < best_cell->q));
        if (!best || value > best_value || (value == best_value && smaller_index)) {
            best = GridChoice{cell.k, cell.q};
            best_value = value;
            best_cell = &cell;
        }
    }
    return best;
}

SelectionResult grid_search(const PreparedGraph& g, std::size_t k_min, std::size_t k_max, std::size_t q_min,
                            std::size_t q_max, const FitConfig& cfg, std::size_t jobs) {
    if (k_min < 1 || k_min > k_max || k_max > g.n()) {
        throw DomainError("K range must be non-empty and within [1, N]");
    }
    if (q_min < 1 || q_min > q_max || q_max > g.v()) {
        throw DomainError("Q range must be non-empty and within [1, V]");
    }
    cfg.validate();

    SelectionResult result;
    result.n = g.n();
    result.v = g.v();
    result.k_min = k_min;
    result.k_max = k_max;
    result.q_min = q_min;
    result.q_max = q_max;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        for (std::size_t q = q_min; q <= q_max; ++q) {
            SelectionCell cell;
            cell.k = k;
            cell.q = q;
            result.cells.push_back(cell);
        }
    }

    if (cfg.init == InitStrategy::per_view_spectral) {
        g.spectral_basis();  // computed once, before workers start
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) {
            SelectionCell& cell = result.cells[i];
            try {
                const PriorHyperparams priors = PriorHyperparams::uniform(cell.k, cell.q);
                const FitReport report = fit(g, cell.k, cell.q, cfg, priors);
                cell.values = evaluate_criteria(g, report, priors);
                cell.iterations = report.iterations;
                cell.converged = report.converged;
                cell.best_restart = report.best_restart;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.ok = false;
                cell.error = e.what();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, result.cells.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    for (Criterion c : kAllCriteria) {
        result.chosen[static_cast<std::size_t>(c)] = choose(result.cells, c);
    }
    return result;
}

SelectionResult grid_search(const MultilayerGraph& g, std::size_t k_min, std::size_t k_max, std::size_t q_min,
                            std::size_t q_max, const FitConfig& cfg, std::size_t jobs) {
    const PreparedGraph prepared(g);
    return grid_search(prepared, k_min, k_max, q_min, q_max, cfg, jobs);
}

}  // namespace mimisbm
