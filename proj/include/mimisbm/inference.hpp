#pragma once

// Variational Bayes EM for the mixture of multilayer SBMs.
//
// Notation used in the comments below:
//   D_kls = psi(eta_kls) - psi(xi_kls)
//   E_kls = psi(xi_kls)  - psi(eta_kls + xi_kls)
// so that E[A log alpha + (1 - A) log(1 - alpha)] = A * D + E under q(alpha).
//
// One outer iteration runs, in order: a Gauss-Seidel sweep over the rows of
// tau, a sweep over the rows of nu, the closed-form M-step for
// (beta, theta, eta, xi), and the post-M-step ELBO. Each step is an exact
// coordinate maximization of the ELBO, so the recorded trace is
// non-decreasing up to floating point.

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mimisbm/core.hpp"
#include "mimisbm/rng.hpp"

namespace mimisbm {

/// Read-only numeric view of a graph: one dense double matrix per layer plus
/// lazily computed per-layer spectral embeddings. Safe to share between
/// concurrent fits.
class PreparedGraph {
public:
    explicit PreparedGraph(const MultilayerGraph& g);

    std::size_t n() const noexcept { return n_; }
    std::size_t v() const noexcept { return layers_.size(); }
    const Eigen::MatrixXd& layer(std::size_t v) const noexcept { return layers_[v]; }
    const MultilayerGraph& graph() const noexcept { return graph_; }

    /// Eigenvectors of each layer's normalized adjacency, descending
    /// eigenvalue order. Computed on first use.
    const std::vector<Eigen::MatrixXd>& spectral_basis() const;

private:
    MultilayerGraph graph_;
    std::size_t n_;
    std::vector<Eigen::MatrixXd> layers_;
    mutable std::once_flag spectral_once_;
    mutable std::vector<Eigen::MatrixXd> spectral_;
};

/// Soft pair counts under the current tau, shared by the nu update and the M-step.
struct PairMoments {
    /// edge[v](k, l) = sum_{i != j} tau_ik tau_jl A_ijv
    std::vector<Eigen::MatrixXd> edge;
    /// pairs(k, l) = sum_{i != j} tau_ik tau_jl
    Eigen::MatrixXd pairs;
};

PairMoments pair_moments(const PreparedGraph& g, const Eigen::MatrixXd& tau);

/// Initial tau / nu for a (k, q) fit; beta, theta, eta, xi hold the priors.
/// Throws DomainError unless 1 <= k <= N and 1 <= q <= V.
VariationalState init_variational(const PreparedGraph& g, std::size_t k, std::size_t q, InitStrategy strategy,
                                  const PriorHyperparams& priors, Rng& rng);
VariationalState init_variational(const MultilayerGraph& g, std::size_t k, std::size_t q, InitStrategy strategy,
                                  Rng& rng);

/// One fixed-point sweep over i of
///   log tau_ik = psi(beta_k) - psi(sum beta)
///              + sum_{j != i} sum_l sum_v sum_s tau_jl nu_vs (A_ijv D_kls + E_kls) + const,
/// rows updated in place in index order.
void vbe_update_tau(const PreparedGraph& g, VariationalState& state);
void vbe_update_tau(const MultilayerGraph& g, VariationalState& state);

/// log nu_vs = psi(theta_s) - psi(sum theta)
///           + sum_{i < j} sum_{k, l} tau_ik tau_jl (A_ijv D_kls + E_kls) + const.
void vbe_update_nu(const PreparedGraph& g, VariationalState& state);
void vbe_update_nu(const PairMoments& moments, VariationalState& state);
void vbe_update_nu(const MultilayerGraph& g, VariationalState& state);

/// Closed-form updates of beta, theta, eta, xi given tau and nu.
void m_step(const PreparedGraph& g, VariationalState& state, const PriorHyperparams& priors);
void m_step(const PairMoments& moments, VariationalState& state, const PriorHyperparams& priors);
void m_step(const MultilayerGraph& g, VariationalState& state, const PriorHyperparams& priors);

/// Sum of the three log Gamma-ratio blocks (Dirichlet on pi, Dirichlet on
/// rho, Beta on alpha over k <= l). No entropy terms.
double gamma_ratio_terms(const VariationalState& state, const PriorHyperparams& priors);

/// -sum tau log tau - sum nu log nu with 0 log 0 = 0.
double entropy_terms(const VariationalState& state);

/// Post-M-step ELBO: gamma_ratio_terms + entropy_terms. Only meaningful when
/// beta, theta, eta, xi are the M-step values for the current tau, nu.
double compute_elbo(const VariationalState& state, const PriorHyperparams& priors);

struct FitReport {
    VariationalState state;
    std::vector<double> elbo_trace;
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t best_restart = 0;
    HardPartition z_map;
    HardPartition w_map;
    /// Final ELBO of every restart, in restart order.
    std::vector<double> restart_elbos;

    double elbo() const { return elbo_trace.empty() ? 0.0 : elbo_trace.back(); }
};

/// Called after every outer iteration with the restart index, the state and
/// the ELBO just appended to the trace.
using IterationObserver = void (*)(std::size_t restart, const VariationalState& state, double elbo, void* user);

/// Runs cfg.n_restarts initializations and returns the one with the highest
/// final ELBO (ties to the lower restart index). Restart r draws from the
/// stream Rng::derive(cfg.seed, {k, q, r}), so results do not depend on how
/// fits are scheduled. Throws DomainError on invalid k, q or cfg.
FitReport fit(const PreparedGraph& g, std::size_t k, std::size_t q, const FitConfig& cfg,
              const std::optional<PriorHyperparams>& priors = std::nullopt, IterationObserver observer = nullptr,
              void* observer_data = nullptr);
FitReport fit(const MultilayerGraph& g, std::size_t k, std::size_t q, const FitConfig& cfg);

/// Single run of the EM loop from a given initial state (tau, nu set;
/// beta, theta, eta, xi are overwritten by the first M-step). The first
/// trace entry is the ELBO after that initial M-step.
FitReport run_vbem(const PreparedGraph& g, VariationalState state, const PriorHyperparams& priors, const FitConfig& cfg,
                   IterationObserver observer = nullptr, void* observer_data = nullptr, std::size_t restart = 0);

}  // namespace mimisbm
