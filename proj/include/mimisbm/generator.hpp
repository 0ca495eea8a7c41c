#pragma once

// Synthetic multilayer networks with a traversing partition Z of the
// observations and a mixture W of views. Each view component s sees a
// coarsened copy of Z: final clusters are merged through a surjective link
// map onto K^s component clusters, and two observations connect with
// probability p_in when their component labels agree, p_out otherwise.
// Label switching perturbs the component labels of each view independently.

#include <cstdint>
#include <optional>
#include <vector>

#include "mimisbm/core.hpp"
#include "mimisbm/rng.hpp"

namespace mimisbm {

struct SimulationConfig {
    std::size_t n = 0;
    std::size_t v = 0;
    std::size_t k = 0;
    std::size_t q = 0;
    double p_in = 0.99;
    double p_out = 0.01;
    double p_switch = 0.0;
    std::uint64_t seed = 0;
    /// Cluster proportions; equiprobable when empty.
    std::vector<double> pi;
    std::vector<double> rho;
    /// Fixes K^s per component instead of drawing it from U({2..K}).
    std::optional<std::vector<std::size_t>> component_k;

    void validate() const;
};

struct GroundTruth {
    HardPartition z;
    HardPartition w;
    ModelParams params;
    std::vector<std::size_t> component_k;
    /// link_maps[s][k] is the component cluster of final cluster k.
    std::vector<std::vector<std::size_t>> link_maps;
};

struct Dataset {
    MultilayerGraph graph;
    GroundTruth truth;
};

/// i.i.d. categorical labels. Throws DomainError on an invalid probability vector.
HardPartition sample_partition(std::size_t n_items, const std::vector<double>& probs, Rng& rng);

/// K x K connectivity slice: p_in where two final clusters share a component
/// cluster, p_out elsewhere. Throws LinkMapError unless link_map is a
/// surjection from [0, k) onto [0, component_k).
Eigen::MatrixXd build_component_alpha(std::size_t k, std::size_t component_k, const std::vector<std::size_t>& link_map,
                                      double p_in, double p_out);

/// Moves each label, with probability `rate`, to one of the other k-1 clusters
/// chosen uniformly. Throws DomainError when k < 2.
HardPartition apply_label_switch(const HardPartition& z, double rate, Rng& rng);

/// Draws a uniform surjective map from [0, k) onto [0, component_k) by
/// rejection. Throws DomainError when component_k > k.
std::vector<std::size_t> draw_link_map(std::size_t k, std::size_t component_k, Rng& rng);

/// Full simulation. The stream is consumed in this order: Z, W, K^s for each
/// component, link map for each component, then for each view its label
/// switches followed by its dyads (i < j, lexicographic).
Dataset generate_dataset(const SimulationConfig& cfg, Rng& rng);

/// Same, seeded from cfg.seed.
Dataset generate_dataset(const SimulationConfig& cfg);

}  // namespace mimisbm
