#include "mimisbm/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mimisbm {

namespace {

void check_probability_vector(const Eigen::VectorXd& p, const char* name) {
    if (p.size() == 0) {
        throw DomainError(std::string(name) + " is empty");
    }
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
            throw DomainError(std::string(name) + " has an entry outside [0, 1]");
        }
    }
    if (std::abs(p.sum() - 1.0) > 1e-12) {
        throw DomainError(std::string(name) + " does not sum to 1");
    }
}

void check_positive(std::span<const double> xs, const char* name) {
    for (double x : xs) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw DomainError(std::string(name) + " must be strictly positive");
        }
    }
}

void check_positive(const Eigen::VectorXd& xs, const char* name) {
    check_positive(std::span<const double>(xs.data(), static_cast<std::size_t>(xs.size())), name);
}

void check_row_stochastic(const Eigen::MatrixXd& m, double tol, const char* name) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if ((m.row(r).array() < 0.0).any()) {
            throw DomainError(std::string(name) + " has a negative entry");
        }
        if (std::abs(m.row(r).sum() - 1.0) > tol) {
            throw DomainError(std::string(name) + " row " + std::to_string(r) + " does not sum to 1");
        }
    }
}

}  // namespace

MultilayerGraph::MultilayerGraph(std::size_t n, std::size_t v) : n_(n), v_(v), data_(n * n * v, 0) {}

MultilayerGraph MultilayerGraph::from_dense(std::size_t n, std::size_t v, std::vector<std::uint8_t> data) {
    if (data.size() != n * n * v) {
        throw DomainError("dense tensor has " + std::to_string(data.size()) + " entries, expected " +
                          std::to_string(n * n * v));
    }
    MultilayerGraph g;
    g.n_ = n;
    g.v_ = v;
    g.data_ = std::move(data);
    for (std::size_t layer = 0; layer < v; ++layer) {
        for (std::size_t i = 0; i < n; ++i) {
            if (g(i, i, layer) != 0) {
                throw DomainError("self-loop at (" + std::to_string(i) + ", " + std::to_string(layer) + ")");
            }
            for (std::size_t j = 0; j < n; ++j) {
                const auto a = g(i, j, layer);
                if (a > 1) {
                    throw DomainError("adjacency entries must be 0 or 1");
                }
                if (a != g(j, i, layer)) {
                    throw DomainError("layer " + std::to_string(layer) + " is not symmetric");
                }
            }
        }
    }
    return g;
}

std::vector<Edge> MultilayerGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            for (std::size_t layer = 0; layer < v_; ++layer) {
                if ((*this)(i, j, layer)) {
                    out.push_back({i, j, layer});
                }
            }
        }
    }
    return out;
}

std::size_t MultilayerGraph::edge_count(std::size_t layer) const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            count += (*this)(i, j, layer);
        }
    }
    return count;
}

MultilayerGraph build_graph(std::size_t n, std::size_t v, std::span<const Edge> edges) {
    MultilayerGraph g(n, v);
    for (const auto& e : edges) {
        if (e.i >= n || e.j >= n || e.layer >= v) {
            throw IndexError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ", " +
                             std::to_string(e.layer) + ") out of range for N=" + std::to_string(n) +
                             ", V=" + std::to_string(v));
        }
        if (e.i == e.j) {
            throw SelfLoopError("self-loop on observation " + std::to_string(e.i) + " in layer " +
                                std::to_string(e.layer));
        }
        g.data_[(e.layer * n + e.i) * n + e.j] = 1;
        g.data_[(e.layer * n + e.j) * n + e.i] = 1;
    }
    return g;
}

std::size_t dyad_layer_count(const MultilayerGraph& g) noexcept {
    const std::size_t n = g.n();
    return n < 2 ? 0 : g.v() * n * (n - 1) / 2;
}

HardPartition::HardPartition(std::vector<std::size_t> labels, std::size_t k) : labels_(std::move(labels)), k_(k) {
    if (labels_.empty()) {
        throw DomainError("partition must cover at least one item");
    }
    if (k_ == 0) {
        throw DomainError("partition must have at least one cluster");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= k_) {
            throw DomainError("label " + std::to_string(labels_[i]) + " at position " + std::to_string(i) +
                              " is not below k=" + std::to_string(k_));
        }
    }
}

HardPartition HardPartition::constant(std::size_t n_items) {
    return HardPartition(std::vector<std::size_t>(n_items, 0), 1);
}

Eigen::MatrixXd HardPartition::indicator() const {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(k_));
    for (std::size_t i = 0; i < size(); ++i) {
        z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels_[i])) = 1.0;
    }
    return z;
}

SymmetricBlockTensor::SymmetricBlockTensor(std::size_t k, std::size_t q, double fill)
    : k_(k), q_(q), tri_(k * (k + 1) / 2), values_(tri_ * q, fill) {}

Eigen::MatrixXd SymmetricBlockTensor::slice(std::size_t s) const {
    const auto kk = static_cast<Eigen::Index>(k_);
    Eigen::MatrixXd m(kk, kk);
    for (std::size_t a = 0; a < k_; ++a) {
        for (std::size_t b = 0; b < k_; ++b) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (*this)(a, b, s);
        }
    }
    return m;
}

void ModelParams::validate() const {
    check_probability_vector(pi, "pi");
    check_probability_vector(rho, "rho");
    if (alpha.k() != k() || alpha.q() != q()) {
        throw DomainError("alpha must have shape K x K x Q");
    }
    for (double a : alpha.values()) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw DomainError("alpha entries must lie in [0, 1]");
        }
    }
}

PriorHyperparams PriorHyperparams::uniform(std::size_t k, std::size_t q, double value) {
    if (k == 0 || q == 0) {
        throw DomainError("K and Q must be at least 1");
    }
    PriorHyperparams p;
    p.beta0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), value);
    p.theta0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(q), value);
    p.eta0 = SymmetricBlockTensor(k, q, value);
    p.xi0 = SymmetricBlockTensor(k, q, value);
    p.validate();
    return p;
}

void PriorHyperparams::validate() const {
    check_positive(beta0, "beta0");
    check_positive(theta0, "theta0");
    if (eta0.k() != k() || eta0.q() != q() || xi0.k() != k() || xi0.q() != q()) {
        throw DomainError("eta0 and xi0 must have shape K x K x Q");
    }
    check_positive(eta0.values(), "eta0");
    check_positive(xi0.values(), "xi0");
}

void VariationalState::validate(double row_tol) const {
    check_row_stochastic(tau, row_tol, "tau");
    check_row_stochastic(nu, row_tol, "nu");
    if (static_cast<std::size_t>(beta.size()) != k() || static_cast<std::size_t>(theta.size()) != q()) {
        throw DomainError("beta / theta sizes do not match tau / nu");
    }
    if (eta.k() != k() || eta.q() != q() || xi.k() != k() || xi.q() != q()) {
        throw DomainError("eta / xi shapes do not match tau / nu");
    }
    check_positive(beta, "beta");
    check_positive(theta, "theta");
    check_positive(eta.values(), "eta");
    check_positive(xi.values(), "xi");
}

void FitConfig::validate() const {
    if (!(eps > 0.0)) {
        throw DomainError("eps must be positive");
    }
    if (rel_eps < 0.0) {
        throw DomainError("rel_eps must be non-negative");
    }
    if (max_iter < 1) {
        throw DomainError("max_iter must be at least 1");
    }
    if (n_restarts < 1) {
        throw DomainError("n_restarts must be at least 1");
    }
    if (inner_passes < 1) {
        throw DomainError("inner_passes must be at least 1");
    }
}

}  // namespace mimisbm
