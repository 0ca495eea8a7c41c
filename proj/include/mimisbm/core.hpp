#pragma once

// Domain types shared by every module: the multilayer adjacency tensor,
// hard partitions, generative parameters, conjugate priors and the
// variational state of one (K, Q) fit.
//
// All indices are 0-based.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mimisbm/errors.hpp"

namespace mimisbm {

/// Undirected edge (i, j) present in one layer.
struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t layer = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Binary tensor A of shape N x N x V. Every layer is symmetric with a zero
/// diagonal; the tensor is materialized fully so that A(i, j, v) needs no
/// index canonicalization in inner loops.
class MultilayerGraph {
public:
    MultilayerGraph() = default;

    /// Empty graph with n observations and v layers.
    MultilayerGraph(std::size_t n, std::size_t v);

    /// Validates a dense row-major tensor laid out as [layer][i][j].
    /// Throws DomainError when an invariant does not hold.
    static MultilayerGraph from_dense(std::size_t n, std::size_t v, std::vector<std::uint8_t> data);

    std::size_t n() const noexcept { return n_; }
    std::size_t v() const noexcept { return v_; }

    std::uint8_t operator()(std::size_t i, std::size_t j, std::size_t layer) const noexcept {
        return data_[(layer * n_ + i) * n_ + j];
    }

    /// Row-major N x N slice of one layer.
    std::span<const std::uint8_t> layer(std::size_t layer) const noexcept {
        return {data_.data() + layer * n_ * n_, n_ * n_};
    }

    /// Canonical edge list: i < j, sorted by (i, j, layer).
    std::vector<Edge> edges() const;

    /// Number of dyads (i < j) present in the layer.
    std::size_t edge_count(std::size_t layer) const;

    bool operator==(const MultilayerGraph&) const = default;

private:
    friend MultilayerGraph build_graph(std::size_t, std::size_t, std::span<const Edge>);

    std::size_t n_ = 0;
    std::size_t v_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Materializes A from an edge list. Duplicate edges and both orientations of
/// the same dyad are accepted. Throws IndexError / SelfLoopError.
MultilayerGraph build_graph(std::size_t n, std::size_t v, std::span<const Edge> edges);

/// V * N(N-1)/2, the number of (dyad, layer) observations.
std::size_t dyad_layer_count(const MultilayerGraph& g) noexcept;

/// Partition stored as a label sequence with labels in [0, k).
class HardPartition {
public:
    HardPartition() = default;
    HardPartition(std::vector<std::size_t> labels, std::size_t k);

    /// All items in cluster 0 of a single-cluster partition.
    static HardPartition constant(std::size_t n_items);

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t k() const noexcept { return k_; }
    std::span<const std::size_t> labels() const noexcept { return labels_; }
    std::size_t operator[](std::size_t i) const noexcept { return labels_[i]; }

    /// One-hot indicator matrix (size() x k()).
    Eigen::MatrixXd indicator() const;

    bool operator==(const HardPartition&) const = default;

private:
    std::vector<std::size_t> labels_;
    std::size_t k_ = 0;
};

/// Tensor of shape K x K x Q, symmetric in its first two indices. Only the
/// k <= l triangle is stored; reads of (l, k, s) are mirrored.
class SymmetricBlockTensor {
public:
    SymmetricBlockTensor() = default;
    SymmetricBlockTensor(std::size_t k, std::size_t q, double fill = 0.0);

    std::size_t k() const noexcept { return k_; }
    std::size_t q() const noexcept { return q_; }

    double operator()(std::size_t k, std::size_t l, std::size_t s) const noexcept {
        return values_[index(k, l, s)];
    }
    double& operator()(std::size_t k, std::size_t l, std::size_t s) noexcept {
        return values_[index(k, l, s)];
    }

    /// Stored (k <= l) values, ordered by s, then k, then l.
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Full symmetric K x K slice for component s.
    Eigen::MatrixXd slice(std::size_t s) const;

    bool operator==(const SymmetricBlockTensor&) const = default;

private:
    std::size_t index(std::size_t k, std::size_t l, std::size_t s) const noexcept {
        if (k > l) {
            std::swap(k, l);
        }
        // Row-major upper triangle including the diagonal.
        return s * tri_ + k * k_ - k * (k + 1) / 2 + l;
    }

    std::size_t k_ = 0;
    std::size_t q_ = 0;
    std::size_t tri_ = 0;
    std::vector<double> values_;
};

/// Generative parameters: pi (K), rho (Q), alpha (K x K x Q).
struct ModelParams {
    Eigen::VectorXd pi;
    Eigen::VectorXd rho;
    SymmetricBlockTensor alpha;

    std::size_t k() const noexcept { return static_cast<std::size_t>(pi.size()); }
    std::size_t q() const noexcept { return static_cast<std::size_t>(rho.size()); }

    /// Throws DomainError when a probability vector or alpha is invalid.
    void validate() const;
};

/// Conjugate prior hyperparameters: Dirichlet beta0 / theta0, Beta eta0 / xi0.
struct PriorHyperparams {
    Eigen::VectorXd beta0;
    Eigen::VectorXd theta0;
    SymmetricBlockTensor eta0;
    SymmetricBlockTensor xi0;

    /// Every hyperparameter equal to `value` (1/2 is the Jeffreys choice).
    static PriorHyperparams uniform(std::size_t k, std::size_t q, double value = 0.5);

    std::size_t k() const noexcept { return static_cast<std::size_t>(beta0.size()); }
    std::size_t q() const noexcept { return static_cast<std::size_t>(theta0.size()); }

    void validate() const;
};

/// Variational parameters of the mean-field posterior for one (K, Q) fit.
struct VariationalState {
    Eigen::MatrixXd tau;  ///< N x K, row-stochastic
    Eigen::MatrixXd nu;   ///< V x Q, row-stochastic
    Eigen::VectorXd beta;
    Eigen::VectorXd theta;
    SymmetricBlockTensor eta;
    SymmetricBlockTensor xi;

    std::size_t n() const noexcept { return static_cast<std::size_t>(tau.rows()); }
    std::size_t v() const noexcept { return static_cast<std::size_t>(nu.rows()); }
    std::size_t k() const noexcept { return static_cast<std::size_t>(tau.cols()); }
    std::size_t q() const noexcept { return static_cast<std::size_t>(nu.cols()); }

    /// Row sums of tau and nu within `row_tol` of one, entries non-negative,
    /// Dirichlet / Beta parameters strictly positive. Throws DomainError.
    void validate(double row_tol = 1e-10) const;
};

enum class InitStrategy { random, per_view_spectral };

struct FitConfig {
    double eps = 1e-6;          ///< absolute ELBO change stopping threshold
    double rel_eps = 1e-9;      ///< secondary relative stopping threshold
    std::size_t max_iter = 200;
    std::size_t n_restarts = 5;
    std::uint64_t seed = 0;
    InitStrategy init = InitStrategy::per_view_spectral;
    std::size_t inner_passes = 1;  ///< tau fixed-point sweeps per outer iteration

    void validate() const;
};

}  // namespace mimisbm
