#pragma once

// Model selection over the number of clusters K and view components Q.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimisbm/core.hpp"
#include "mimisbm/inference.hpp"

namespace mimisbm {

enum class Criterion { ilvb = 0, icl_exact = 1, icl_variational = 2, icl_approx = 3 };

inline constexpr std::array<Criterion, 4> kAllCriteria = {Criterion::ilvb, Criterion::icl_exact,
                                                          Criterion::icl_variational, Criterion::icl_approx};

/// Report key of a criterion: "ilvb", "icl_exact", "icl_variational", "icl_approx".
std::string_view criterion_name(Criterion c);

/// Integrated likelihood variational Bayes; the post-M-step ELBO.
double ilvb(const VariationalState& state, const PriorHyperparams& priors);

/// Exact ICL of hard assignments: the Gamma-ratio blocks evaluated at the
/// M-step parameters of the one-hot state. Throws DomainError on size mismatch.
double icl_exact(const MultilayerGraph& g, const HardPartition& z, const HardPartition& w,
                 const PriorHyperparams& priors);
double icl_exact(const PreparedGraph& g, const HardPartition& z, const HardPartition& w,
                 const PriorHyperparams& priors);

/// The exact-ICL expression at the soft M-step parameters (ILvb without entropies).
double icl_variational(const VariationalState& state, const PriorHyperparams& priors);

/// pen(K, Q) = 1/2 K(K+1)/2 Q log(V N(N-1)/2) + 1/2 (K-1) log N + 1/2 (Q-1) log V.
/// The alpha term is 0 when there are no dyads (N = 1).
double icl_penalty(std::size_t k, std::size_t q, std::size_t n, std::size_t v);

/// elbo - pen(k, q).
double icl_approx(double elbo, std::size_t k, std::size_t q, std::size_t n, std::size_t v);

/// One-hot state for (z, w) with the M-step applied.
VariationalState hardened_state(const PreparedGraph& g, const HardPartition& z, const HardPartition& w,
                                const PriorHyperparams& priors);

struct CriterionValues {
    double ilvb = 0.0;
    double icl_exact = 0.0;
    double icl_variational = 0.0;
    double icl_approx = 0.0;

    double get(Criterion c) const noexcept;
};

/// All four criteria for a fitted report. icl_exact uses the MAP partitions.
CriterionValues evaluate_criteria(const PreparedGraph& g, const FitReport& report, const PriorHyperparams& priors);

struct SelectionCell {
    std::size_t k = 0;
    std::size_t q = 0;
    bool ok = false;
    std::string error;  ///< set when the fit failed
    CriterionValues values;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t best_restart = 0;
};

struct GridChoice {
    std::size_t k = 0;
    std::size_t q = 0;
};

struct SelectionResult {
    std::size_t n = 0;
    std::size_t v = 0;
    std::size_t k_min = 0, k_max = 0;
    std::size_t q_min = 0, q_max = 0;
    /// Sorted by (k, q).
    std::vector<SelectionCell> cells;
    /// Indexed by Criterion; empty when no cell produced a finite value.
    std::array<std::optional<GridChoice>, 4> chosen;

    const SelectionCell* cell(std::size_t k, std::size_t q) const;
};

/// Maximizer of a criterion over the ok cells with finite values; ties go to
/// the smaller K, then the smaller Q.
std::optional<GridChoice> choose(const std::vector<SelectionCell>& cells, Criterion c);

/// Fits every (K, Q) in [k_min, k_max] x [q_min, q_max] and records all
/// criteria. Up to `jobs` cells run concurrently; every cell draws from its own
/// seeded streams, so the result does not depend on `jobs`. A cell whose fit
/// throws is kept with ok = false. Throws DomainError on invalid ranges.
SelectionResult grid_search(const PreparedGraph& g, std::size_t k_min, std::size_t k_max, std::size_t q_min,
                            std::size_t q_max, const FitConfig& cfg, std::size_t jobs = 1);
SelectionResult grid_search(const MultilayerGraph& g, std::size_t k_min, std::size_t k_max, std::size_t q_min,
                            std::size_t q_max, const FitConfig& cfg, std::size_t jobs = 1);

}  // namespace mimisbm
