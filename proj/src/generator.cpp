#include "mimisbm/generator.hpp"

#include <cmath>
#include <string>

namespace mimisbm {

namespace {

void check_probs(const std::vector<double>& probs) {
    if (probs.empty()) {
        throw DomainError("probability vector is empty");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("probability outside [0, 1]");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("probabilities sum to " + std::to_string(total) + ", not 1");
    }
}

std::vector<double> equiprobable(std::size_t m) { return std::vector<double>(m, 1.0 / static_cast<double>(m)); }

Eigen::VectorXd to_vector(const std::vector<double>& xs) {
    return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

}  // namespace

void SimulationConfig::validate() const {
    if (n < 1 || v < 1 || k < 1 || q < 1) {
        throw DomainError("n, v, k and q must all be at least 1");
    }
    if (!component_k && k < 2) {
        throw DomainError("k must be at least 2 when component cluster counts are drawn from {2..K}");
    }
    if (component_k) {
        if (component_k->size() != q) {
            throw DomainError("component_k must have one entry per component");
        }
        for (std::size_t ck : *component_k) {
            if (ck < 1 || ck > k) {
                throw DomainError("component_k entries must lie in [1, k]");
            }
            if (p_switch > 0.0 && ck < 2) {
                throw DomainError("label switching needs at least 2 clusters per component");
            }
        }
    }
    if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
        throw DomainError("p_in and p_out must lie in [0, 1]");
    }
    if (!(p_switch >= 0.0 && p_switch <= 1.0)) {
        throw DomainError("p_switch must lie in [0, 1]");
    }
    if (!pi.empty()) {
        if (pi.size() != k) {
            throw DomainError("pi must have k entries");
        }
        check_probs(pi);
    }
    if (!rho.empty()) {
        if (rho.size() != q) {
            throw DomainError("rho must have q entries");
        }
        check_probs(rho);
    }
}

HardPartition sample_partition(std::size_t n_items, const std::vector<double>& probs, Rng& rng) {
    check_probs(probs);
    std::vector<std::size_t> labels(n_items);
    for (auto& label : labels) {
        const double u = rng.uniform();
        double cumulative = 0.0;
        std::size_t c = 0;
        // The last positive-probability category absorbs rounding slack.
        std::size_t last_positive = 0;
        for (; c < probs.size(); ++c) {
            if (probs[c] > 0.0) {
                last_positive = c;
            }
            cumulative += probs[c];
            if (u < cumulative && probs[c] > 0.0) {
                break;
            }
        }
        label = c < probs.size() ? c : last_positive;
    }
    return HardPartition(std::move(labels), probs.size());
}

Eigen::MatrixXd build_component_alpha(std::size_t k, std::size_t component_k, const std::vector<std::size_t>& link_map,
                                      double p_in, double p_out) {
    if (link_map.size() != k) {
        throw LinkMapError("link map has " + std::to_string(link_map.size()) + " entries, expected " + std::to_string(k));
    }
    std::vector<bool> hit(component_k, false);
    for (std::size_t c : link_map) {
        if (c >= component_k) {
            throw LinkMapError("link map target " + std::to_string(c) + " is not below " + std::to_string(component_k));
        }
        hit[c] = true;
    }
    for (std::size_t c = 0; c < component_k; ++c) {
        if (!hit[c]) {
            throw LinkMapError("component cluster " + std::to_string(c) + " has no final cluster linked to it");
        }
    }
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd alpha(kk, kk);
    for (Eigen::Index a = 0; a < kk; ++a) {
        for (Eigen::Index b = 0; b < kk; ++b) {
            alpha(a, b) = link_map[static_cast<std::size_t>(a)] == link_map[static_cast<std::size_t>(b)] ? p_in : p_out;
        }
    }
    return alpha;
}

HardPartition apply_label_switch(const HardPartition& z, double rate, Rng& rng) {
    if (z.k() < 2) {
        throw DomainError("label switching needs at least 2 clusters");
    }
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw DomainError("switch rate must lie in [0, 1]");
    }
    std::vector<std::size_t> labels(z.labels().begin(), z.labels().end());
    for (auto& label : labels) {
        if (rng.bernoulli(rate)) {
            // Uniform over the k-1 other clusters.
            const std::size_t draw = rng.below(z.k() - 1);
            label = draw < label ? draw : draw + 1;
        }
    }
    return HardPartition(std::move(labels), z.k());
}

std::vector<std::size_t> draw_link_map(std::size_t k, std::size_t component_k, Rng& rng) {
    if (component_k < 1 || component_k > k) {
        throw DomainError("component cluster count must lie in [1, k]");
    }
    std::vector<std::size_t> map(k);
    std::vector<bool> hit(component_k);
    for (;;) {
        std::fill(hit.begin(), hit.end(), false);
        std::size_t distinct = 0;
        for (auto& c : map) {
            c = rng.below(component_k);
            if (!hit[c]) {
                hit[c] = true;
                ++distinct;
            }
        }
        if (distinct == component_k) {
            return map;
        }
    }
}

Dataset generate_dataset(const SimulationConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto pi = cfg.pi.empty() ? equiprobable(cfg.k) : cfg.pi;
    const auto rho = cfg.rho.empty() ? equiprobable(cfg.q) : cfg.rho;

    HardPartition z = sample_partition(cfg.n, pi, rng);
    HardPartition w = sample_partition(cfg.v, rho, rng);

    std::vector<std::size_t> component_k(cfg.q);
    for (std::size_t s = 0; s < cfg.q; ++s) {
        // K^s ~ U({2, ..., K})
        component_k[s] = cfg.component_k ? (*cfg.component_k)[s] : 2 + rng.below(cfg.k - 1);
    }
    std::vector<std::vector<std::size_t>> link_maps(cfg.q);
    for (std::size_t s = 0; s < cfg.q; ++s) {
        link_maps[s] = draw_link_map(cfg.k, component_k[s], rng);
    }

    ModelParams params;
    params.pi = to_vector(pi);
    params.rho = to_vector(rho);
    params.alpha = SymmetricBlockTensor(cfg.k, cfg.q);
    for (std::size_t s = 0; s < cfg.q; ++s) {
        const Eigen::MatrixXd slice = build_component_alpha(cfg.k, component_k[s], link_maps[s], cfg.p_in, cfg.p_out);
        for (std::size_t a = 0; a < cfg.k; ++a) {
            for (std::size_t b = a; b < cfg.k; ++b) {
                params.alpha(a, b, s) = slice(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }

    const std::size_t n = cfg.n;
    std::vector<std::uint8_t> dense(n * n * cfg.v, 0);
    std::vector<std::size_t> local(n);
    for (std::size_t layer = 0; layer < cfg.v; ++layer) {
        const std::size_t s = w[layer];
        for (std::size_t i = 0; i < n; ++i) {
            local[i] = link_maps[s][z[i]];
        }
        HardPartition view_labels(local, component_k[s]);
        if (cfg.p_switch > 0.0) {
            view_labels = apply_label_switch(view_labels, cfg.p_switch, rng);
        }
        std::uint8_t* a = dense.data() + layer * n * n;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double p = view_labels[i] == view_labels[j] ? cfg.p_in : cfg.p_out;
                if (rng.bernoulli(p)) {
                    a[i * n + j] = 1;
                    a[j * n + i] = 1;
                }
            }
        }
    }

    Dataset out{MultilayerGraph::from_dense(n, cfg.v, std::move(dense)),
                GroundTruth{std::move(z), std::move(w), std::move(params), std::move(component_k), std::move(link_maps)}};
    return out;
}

Dataset generate_dataset(const SimulationConfig& cfg) {
    Rng rng(cfg.seed);
    return generate_dataset(cfg, rng);
}

}  // namespace mimisbm
