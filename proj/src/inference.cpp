#include "mimisbm/inference.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cluster.hpp"
#include "mimisbm/mathfn.hpp"
#include "mimisbm/metrics.hpp"

namespace mimisbm {

namespace {

constexpr double kInitFloor = 1e-10;
constexpr double kUpdateFloor = 1e-12;
constexpr double kInitConfidence = 0.9;

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_dims(std::size_t n, std::size_t v, std::size_t k, std::size_t q) {
    if (k < 1 || k > n) {
        throw DomainError("k=" + std::to_string(k) + " must lie in [1, N=" + std::to_string(n) + "]");
    }
    if (q < 1 || q > v) {
        throw DomainError("q=" + std::to_string(q) + " must lie in [1, V=" + std::to_string(v) + "]");
    }
}

// Floors a probability row and renormalizes it.
template <typename Row>
void floor_and_normalize(Row&& row, double floor) {
    row = row.cwiseMax(floor);
    row /= row.sum();
}

// Softmax of `logits` written into `row`, computed with max subtraction.
template <typename Row>
void softmax_into(const Eigen::VectorXd& logits, Row&& row, double floor) {
    const double top = logits.maxCoeff();
    row = (logits.array() - top).exp().matrix().transpose();
    row /= row.sum();
    floor_and_normalize(row, floor);
}

// Digamma tables: expected log-likelihood of an edge (D) and of a non-edge
// offset (E) per component, as full symmetric K x K matrices.
struct DigammaTables {
    std::vector<Eigen::MatrixXd> edge;     // D_s
    std::vector<Eigen::MatrixXd> nonedge;  // E_s
};

DigammaTables digamma_tables(const VariationalState& state) {
    const std::size_t k = state.k();
    const std::size_t q = state.q();
    DigammaTables t;
    t.edge.assign(q, Eigen::MatrixXd(idx(k), idx(k)));
    t.nonedge.assign(q, Eigen::MatrixXd(idx(k), idx(k)));
    for (std::size_t s = 0; s < q; ++s) {
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a; b < k; ++b) {
                const double eta = state.eta(a, b, s);
                const double xi = state.xi(a, b, s);
                const double psi_xi = mathfn::digamma(xi);
                const double d = mathfn::digamma(eta) - psi_xi;
                const double e = psi_xi - mathfn::digamma(eta + xi);
                t.edge[s](idx(a), idx(b)) = t.edge[s](idx(b), idx(a)) = d;
                t.nonedge[s](idx(a), idx(b)) = t.nonedge[s](idx(b), idx(a)) = e;
            }
        }
    }
    return t;
}

Eigen::VectorXd dirichlet_log_expectation(const Eigen::VectorXd& conc) {
    const double total = mathfn::digamma(conc.sum());
    Eigen::VectorXd out(conc.size());
    for (Index i = 0; i < conc.size(); ++i) {
        out[i] = mathfn::digamma(conc[i]) - total;
    }
    return out;
}

double dirichlet_ratio(const Eigen::VectorXd& prior, const Eigen::VectorXd& post) {
    double value = mathfn::log_gamma(prior.sum()) - mathfn::log_gamma(post.sum());
    for (Index i = 0; i < prior.size(); ++i) {
        value += mathfn::log_gamma(post[i]) - mathfn::log_gamma(prior[i]);
    }
    return value;
}

double neg_entropy(const Eigen::MatrixXd& m) {
    double total = 0.0;
    for (Index i = 0; i < m.size(); ++i) {
        const double x = m.data()[i];
        if (x > 0.0) {
            total += x * std::log(x);
        }
    }
    return total;
}

Eigen::MatrixXd soften(const std::vector<std::size_t>& labels, std::size_t k) {
    const double base = (1.0 - kInitConfidence) / static_cast<double>(k);
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(idx(labels.size()), idx(k), base);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        m(idx(i), idx(labels[i])) += kInitConfidence;
    }
    return m;
}

Eigen::MatrixXd random_rows(std::size_t rows, std::size_t cols, Rng& rng) {
    Eigen::MatrixXd m(idx(rows), idx(cols));
    for (Index r = 0; r < m.rows(); ++r) {
        // Flat Dirichlet draw via normalized exponentials.
        for (Index c = 0; c < m.cols(); ++c) {
            m(r, c) = -std::log(1.0 - rng.uniform());
        }
        m.row(r) /= m.row(r).sum();
    }
    return m;
}

// Per-view spectral clustering, combined through co-membership matrices.
void spectral_init(const PreparedGraph& g, std::size_t k, std::size_t q, Rng& rng, Eigen::MatrixXd& tau,
                   Eigen::MatrixXd& nu) {
    const std::size_t n = g.n();
    const std::size_t v = g.v();
    const auto& basis = g.spectral_basis();

    const std::size_t dyads = n * (n - 1) / 2;
    Eigen::MatrixXd layer_vectors(idx(v), idx(dyads));
    Eigen::MatrixXd mean_comembership = Eigen::MatrixXd::Zero(idx(n), idx(n));
    for (std::size_t layer = 0; layer < v; ++layer) {
        const auto labels = detail::spectral_labels(basis[layer], k, rng);
        std::size_t d = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mean_comembership(idx(i), idx(i)) += 1.0;
            for (std::size_t j = i + 1; j < n; ++j, ++d) {
                const double same = labels[i] == labels[j] ? 1.0 : 0.0;
                layer_vectors(idx(layer), idx(d)) = same;
                mean_comembership(idx(i), idx(j)) += same;
                mean_comembership(idx(j), idx(i)) += same;
            }
        }
    }
    mean_comembership /= static_cast<double>(v);

    nu = soften(detail::kmeans(layer_vectors, q, rng), q);
    tau = soften(detail::kmeans(mean_comembership, k, rng), k);
}

}  // namespace

PreparedGraph::PreparedGraph(const MultilayerGraph& g) : graph_(g), n_(g.n()) {
    layers_.reserve(g.v());
    for (std::size_t layer = 0; layer < g.v(); ++layer) {
        const auto raw = g.layer(layer);
        Eigen::MatrixXd a(idx(n_), idx(n_));
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                a(idx(i), idx(j)) = raw[i * n_ + j];
            }
        }
        layers_.push_back(std::move(a));
    }
}

const std::vector<Eigen::MatrixXd>& PreparedGraph::spectral_basis() const {
    std::call_once(spectral_once_, [this] {
        spectral_.reserve(layers_.size());
        for (const auto& a : layers_) {
            spectral_.push_back(detail::normalized_adjacency_eigenvectors(a));
        }
    });
    return spectral_;
}

PairMoments pair_moments(const PreparedGraph& g, const Eigen::MatrixXd& tau) {
    PairMoments m;
    const Eigen::RowVectorXd colsum = tau.colwise().sum();
    m.pairs = colsum.transpose() * colsum - tau.transpose() * tau;
    m.edge.reserve(g.v());
    for (std::size_t layer = 0; layer < g.v(); ++layer) {
        const Eigen::MatrixXd a_tau = g.layer(layer) * tau;
        m.edge.push_back(tau.transpose() * a_tau);
    }
    return m;
}

VariationalState init_variational(const PreparedGraph& g, std::size_t k, std::size_t q, InitStrategy strategy,
                                  const PriorHyperparams& priors, Rng& rng) {
    check_dims(g.n(), g.v(), k, q);
    priors.validate();
    if (priors.k() != k || priors.q() != q) {
        throw DomainError("prior dimensions do not match (k, q)");
    }
    VariationalState state;
    if (strategy == InitStrategy::random) {
        state.tau = random_rows(g.n(), k, rng);
        state.nu = random_rows(g.v(), q, rng);
    } else {
        spectral_init(g, k, q, rng, state.tau, state.nu);
    }
    for (Index r = 0; r < state.tau.rows(); ++r) {
        floor_and_normalize(state.tau.row(r), kInitFloor);
    }
    for (Index r = 0; r < state.nu.rows(); ++r) {
        floor_and_normalize(state.nu.row(r), kInitFloor);
    }
    state.beta = priors.beta0;
    state.theta = priors.theta0;
    state.eta = priors.eta0;
    state.xi = priors.xi0;
    return state;
}

VariationalState init_variational(const MultilayerGraph& g, std::size_t k, std::size_t q, InitStrategy strategy,
                                  Rng& rng) {
    const PreparedGraph prepared(g);
    return init_variational(prepared, k, q, strategy, PriorHyperparams::uniform(k, q), rng);
}

void vbe_update_tau(const PreparedGraph& g, VariationalState& state) {
    const std::size_t n = state.n();
    const std::size_t v = state.v();
    const std::size_t q = state.q();
    const DigammaTables tables = digamma_tables(state);
    const Eigen::VectorXd prior_term = dirichlet_log_expectation(state.beta);

    // Component tables weighted by each layer's membership.
    std::vector<Eigen::MatrixXd> edge_by_layer(v);
    for (std::size_t layer = 0; layer < v; ++layer) {
        edge_by_layer[layer] = Eigen::MatrixXd::Zero(idx(state.k()), idx(state.k()));
        for (std::size_t s = 0; s < q; ++s) {
            edge_by_layer[layer] += state.nu(idx(layer), idx(s)) * tables.edge[s];
        }
    }
    const Eigen::RowVectorXd layer_mass = state.nu.colwise().sum();
    Eigen::MatrixXd nonedge = Eigen::MatrixXd::Zero(idx(state.k()), idx(state.k()));
    for (std::size_t s = 0; s < q; ++s) {
        nonedge += layer_mass[idx(s)] * tables.nonedge[s];
    }

    Eigen::VectorXd colsum = state.tau.colwise().sum().transpose();
    Eigen::VectorXd logits(idx(state.k()));
    Eigen::RowVectorXd row(idx(state.k()));
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd others = colsum - state.tau.row(idx(i)).transpose();
        logits = prior_term + nonedge * others;
        for (std::size_t layer = 0; layer < v; ++layer) {
            // sum_j A_ijv tau_jl; the zero diagonal excludes j == i.
            const Eigen::VectorXd neighbours = state.tau.transpose() * g.layer(layer).col(idx(i));
            logits.noalias() += edge_by_layer[layer] * neighbours;
        }
        softmax_into(logits, row, kUpdateFloor);
        colsum += (row - state.tau.row(idx(i))).transpose();
        state.tau.row(idx(i)) = row;
    }
}

void vbe_update_tau(const MultilayerGraph& g, VariationalState& state) {
    vbe_update_tau(PreparedGraph(g), state);
}

void vbe_update_nu(const PairMoments& moments, VariationalState& state) {
    const std::size_t v = state.v();
    const std::size_t q = state.q();
    const DigammaTables tables = digamma_tables(state);
    const Eigen::VectorXd prior_term = dirichlet_log_expectation(state.theta);

    // sum_{i<j} sum_{k,l} = 1/2 sum_{i!=j} sum_{k,l} by symmetry of A and of the tables.
    Eigen::VectorXd nonedge_term(idx(q));
    for (std::size_t s = 0; s < q; ++s) {
        nonedge_term[idx(s)] = 0.5 * moments.pairs.cwiseProduct(tables.nonedge[s]).sum();
    }
    Eigen::VectorXd logits(idx(q));
    Eigen::RowVectorXd row(idx(q));
    for (std::size_t layer = 0; layer < v; ++layer) {
        for (std::size_t s = 0; s < q; ++s) {
            logits[idx(s)] = prior_term[idx(s)] + nonedge_term[idx(s)] +
                             0.5 * moments.edge[layer].cwiseProduct(tables.edge[s]).sum();
        }
        softmax_into(logits, row, kUpdateFloor);
        state.nu.row(idx(layer)) = row;
    }
}

void vbe_update_nu(const PreparedGraph& g, VariationalState& state) {
    vbe_update_nu(pair_moments(g, state.tau), state);
}

void vbe_update_nu(const MultilayerGraph& g, VariationalState& state) {
    vbe_update_nu(PreparedGraph(g), state);
}

void m_step(const PairMoments& moments, VariationalState& state, const PriorHyperparams& priors) {
    const std::size_t k = state.k();
    const std::size_t q = state.q();
    state.beta = priors.beta0 + state.tau.colwise().sum().transpose();
    state.theta = priors.theta0 + state.nu.colwise().sum().transpose();
    state.eta = SymmetricBlockTensor(k, q);
    state.xi = SymmetricBlockTensor(k, q);
    for (std::size_t s = 0; s < q; ++s) {
        Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(idx(k), idx(k));
        double mass = 0.0;
        for (std::size_t layer = 0; layer < moments.edge.size(); ++layer) {
            const double w = state.nu(idx(layer), idx(s));
            edges += w * moments.edge[layer];
            mass += w;
        }
        const Eigen::MatrixXd nonedges = mass * moments.pairs - edges;
        for (std::size_t a = 0; a < k; ++a) {
            // Ordered i != j pairs count each unordered dyad twice when k == l.
            const double scale_diag = 0.5;
            state.eta(a, a, s) = priors.eta0(a, a, s) + scale_diag * edges(idx(a), idx(a));
            state.xi(a, a, s) = priors.xi0(a, a, s) + scale_diag * nonedges(idx(a), idx(a));
            for (std::size_t b = a + 1; b < k; ++b) {
                state.eta(a, b, s) = priors.eta0(a, b, s) + edges(idx(a), idx(b));
                state.xi(a, b, s) = priors.xi0(a, b, s) + nonedges(idx(a), idx(b));
            }
        }
    }
}

void m_step(const PreparedGraph& g, VariationalState& state, const PriorHyperparams& priors) {
    m_step(pair_moments(g, state.tau), state, priors);
}

void m_step(const MultilayerGraph& g, VariationalState& state, const PriorHyperparams& priors) {
    m_step(PreparedGraph(g), state, priors);
}

double gamma_ratio_terms(const VariationalState& state, const PriorHyperparams& priors) {
    double value = dirichlet_ratio(priors.beta0, state.beta) + dirichlet_ratio(priors.theta0, state.theta);
    const auto eta0 = priors.eta0.values();
    const auto xi0 = priors.xi0.values();
    const auto eta = state.eta.values();
    const auto xi = state.xi.values();
    for (std::size_t c = 0; c < eta.size(); ++c) {
        value += mathfn::log_gamma(eta0[c] + xi0[c]) - mathfn::log_gamma(eta0[c]) - mathfn::log_gamma(xi0[c]) +
                 mathfn::log_gamma(eta[c]) + mathfn::log_gamma(xi[c]) - mathfn::log_gamma(eta[c] + xi[c]);
    }
    return value;
}

double entropy_terms(const VariationalState& state) { return -neg_entropy(state.tau) - neg_entropy(state.nu); }

double compute_elbo(const VariationalState& state, const PriorHyperparams& priors) {
    return gamma_ratio_terms(state, priors) + entropy_terms(state);
}

FitReport run_vbem(const PreparedGraph& g, VariationalState state, const PriorHyperparams& priors,
                   const FitConfig& cfg, IterationObserver observer, void* observer_data, std::size_t restart) {
    FitReport report;
    m_step(g, state, priors);
    double elbo = compute_elbo(state, priors);
    report.elbo_trace.push_back(elbo);
    if (observer) {
        observer(restart, state, elbo, observer_data);
    }
    for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
        for (std::size_t pass = 0; pass < cfg.inner_passes; ++pass) {
            vbe_update_tau(g, state);
        }
        const PairMoments moments = pair_moments(g, state.tau);
        vbe_update_nu(moments, state);
        m_step(moments, state, priors);
        const double next = compute_elbo(state, priors);
        report.elbo_trace.push_back(next);
        report.iterations = iter;
        if (observer) {
            observer(restart, state, next, observer_data);
        }
        const double change = std::abs(next - elbo);
        elbo = next;
        if (change < cfg.eps || change < cfg.rel_eps * std::abs(next)) {
            report.converged = true;
            break;
        }
    }
    report.z_map = map_assign(state.tau);
    report.w_map = map_assign(state.nu);
    report.state = std::move(state);
    report.restart_elbos = {elbo};
    return report;
}

FitReport fit(const PreparedGraph& g, std::size_t k, std::size_t q, const FitConfig& cfg,
              const std::optional<PriorHyperparams>& priors, IterationObserver observer, void* observer_data) {
    cfg.validate();
    check_dims(g.n(), g.v(), k, q);
    const PriorHyperparams prior = priors ? *priors : PriorHyperparams::uniform(k, q);

    FitReport best;
    std::vector<double> finals;
    bool have_best = false;
    for (std::size_t r = 0; r < cfg.n_restarts; ++r) {
        Rng rng(Rng::derive(cfg.seed, {k, q, r}));
        VariationalState init = init_variational(g, k, q, cfg.init, prior, rng);
        FitReport run = run_vbem(g, std::move(init), prior, cfg, observer, observer_data, r);
        finals.push_back(run.elbo());
        if (!have_best || run.elbo() > best.elbo()) {
            best = std::move(run);
            best.best_restart = r;
            have_best = true;
        }
    }
    best.restart_elbos = std::move(finals);
    return best;
}

FitReport fit(const MultilayerGraph& g, std::size_t k, std::size_t q, const FitConfig& cfg) {
    const PreparedGraph prepared(g);
    return fit(prepared, k, q, cfg);
}

}  // namespace mimisbm
