#include "doctest.h"

#include <cmath>
#include <set>

#include "mimisbm/generator.hpp"
#include "mimisbm/metrics.hpp"

using namespace mimisbm;

TEST_CASE("sample_partition") {
    Rng rng(3);
    SUBCASE("degenerate categorical") {
        const auto p = sample_partition(50, {1.0}, rng);
        for (auto label : p.labels()) {
            CHECK(label == 0);
        }
    }
    SUBCASE("fair coin stays within 3 sigma") {
        const auto p = sample_partition(10000, {0.5, 0.5}, rng);
        double zeros = 0;
        for (auto label : p.labels()) {
            zeros += label == 0;
        }
        CHECK(zeros / 10000 >= 0.47);
        CHECK(zeros / 10000 <= 0.53);
    }
    SUBCASE("equiprobable five clusters") {
        const auto p = sample_partition(5000, {0.2, 0.2, 0.2, 0.2, 0.2}, rng);
        CHECK(p.k() == 5);
        std::vector<int> counts(5, 0);
        for (auto label : p.labels()) {
            ++counts[label];
        }
        for (int c : counts) {
            CHECK(std::abs(c - 1000) < 3 * std::sqrt(5000 * 0.2 * 0.8));
        }
    }
    SUBCASE("zero-probability categories never appear") {
        const auto p = sample_partition(2000, {0.0, 0.7, 0.0, 0.3}, rng);
        for (auto label : p.labels()) {
            CHECK((label == 1 || label == 3));
        }
    }
    SUBCASE("invalid vectors") {
        CHECK_THROWS_AS(sample_partition(3, {}, rng), DomainError);
        CHECK_THROWS_AS(sample_partition(3, {0.6, 0.6}, rng), DomainError);
        CHECK_THROWS_AS(sample_partition(3, {1.5, -0.5}, rng), DomainError);
    }
}

TEST_CASE("build_component_alpha") {
    SUBCASE("identity map") {
        const auto a = build_component_alpha(4, 4, {0, 1, 2, 3}, 0.9, 0.1);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                CHECK(a(i, j) == (i == j ? 0.9 : 0.1));
            }
        }
    }
    SUBCASE("all-to-one map") {
        const auto a = build_component_alpha(3, 1, {0, 0, 0}, 0.9, 0.1);
        CHECK((a.array() == 0.9).all());
    }
    SUBCASE("merged groups") {
        // {0, 1} -> 1, {2, 4} -> 2, {3} -> 0
        const auto a = build_component_alpha(5, 3, {1, 1, 2, 0, 2}, 0.99, 0.01);
        CHECK(a(0, 1) == 0.99);
        CHECK(a(1, 0) == 0.99);
        CHECK(a(3, 3) == 0.99);
        CHECK(a(2, 4) == 0.99);
        CHECK(a(0, 2) == 0.01);
        CHECK(a(3, 4) == 0.01);
        CHECK(a.isApprox(a.transpose()));
    }
    SUBCASE("non-surjective or malformed maps") {
        CHECK_THROWS_AS(build_component_alpha(3, 3, {0, 1, 1}, 0.9, 0.1), LinkMapError);
        CHECK_THROWS_AS(build_component_alpha(3, 2, {0, 1, 2}, 0.9, 0.1), LinkMapError);
        CHECK_THROWS_AS(build_component_alpha(3, 2, {0, 1}, 0.9, 0.1), LinkMapError);
    }
}

TEST_CASE("apply_label_switch") {
    Rng rng(11);
    const auto z = sample_partition(3000, {0.25, 0.25, 0.25, 0.25}, rng);
    SUBCASE("rate 0 is the identity") { CHECK(apply_label_switch(z, 0.0, rng) == z); }
    SUBCASE("rate 1 with two clusters flips every label") {
        const HardPartition two({0, 1, 1, 0, 1}, 2);
        const auto out = apply_label_switch(two, 1.0, rng);
        for (std::size_t i = 0; i < two.size(); ++i) {
            CHECK(out[i] == 1 - two[i]);
        }
    }
    SUBCASE("rate 1 moves every label to one of the others, uniformly") {
        const auto out = apply_label_switch(z, 1.0, rng);
        std::vector<std::vector<int>> moves(4, std::vector<int>(4, 0));
        for (std::size_t i = 0; i < z.size(); ++i) {
            CHECK(out[i] != z[i]);
            ++moves[z[i]][out[i]];
        }
        for (int from = 0; from < 4; ++from) {
            int total = 0;
            for (int to = 0; to < 4; ++to) {
                total += moves[from][to];
            }
            for (int to = 0; to < 4; ++to) {
                if (to != from) {
                    const double p = 1.0 / 3.0;
                    CHECK(std::abs(moves[from][to] - total * p) < 4 * std::sqrt(total * p * (1 - p)));
                }
            }
        }
    }
    SUBCASE("change frequency matches the rate") {
        const double rate = 0.3;
        const auto out = apply_label_switch(z, rate, rng);
        double changed = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            changed += out[i] != z[i];
        }
        const double n = static_cast<double>(z.size());
        CHECK(std::abs(changed - n * rate) < 3 * std::sqrt(n * rate * (1 - rate)));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(apply_label_switch(HardPartition::constant(4), 0.5, rng), DomainError);
        CHECK_THROWS_AS(apply_label_switch(z, 1.5, rng), DomainError);
    }
}

TEST_CASE("draw_link_map is surjective") {
    Rng rng(5);
    for (std::size_t k = 2; k <= 8; ++k) {
        for (std::size_t ck = 1; ck <= k; ++ck) {
            const auto map = draw_link_map(k, ck, rng);
            CHECK(map.size() == k);
            CHECK(std::set<std::size_t>(map.begin(), map.end()).size() == ck);
            CHECK_NOTHROW(build_component_alpha(k, ck, map, 0.9, 0.1));
        }
    }
    CHECK_THROWS_AS(draw_link_map(3, 4, rng), DomainError);
    CHECK_THROWS_AS(draw_link_map(3, 0, rng), DomainError);
}

namespace {

SimulationConfig config(std::size_t n, std::size_t v, std::size_t k, std::size_t q, std::uint64_t seed) {
    SimulationConfig cfg;
    cfg.n = n;
    cfg.v = v;
    cfg.k = k;
    cfg.q = q;
    cfg.seed = seed;
    return cfg;
}

// Labels of the connected components of one layer, in order of first vertex.
HardPartition components(const MultilayerGraph& g, std::size_t layer) {
    const std::size_t n = g.n();
    std::vector<std::size_t> label(n, n);
    std::size_t next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != n) {
            continue;
        }
        std::vector<std::size_t> stack = {s};
        label[s] = next;
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (g(i, j, layer) && label[j] == n) {
                    label[j] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    return HardPartition(label, next);
}

}  // namespace

TEST_CASE("generate_dataset shapes and ground truth") {
    const auto ds = generate_dataset(config(50, 15, 5, 3, 1));
    CHECK(ds.graph.n() == 50);
    CHECK(ds.graph.v() == 15);
    CHECK(ds.truth.z.size() == 50);
    CHECK(ds.truth.z.k() == 5);
    CHECK(ds.truth.w.size() == 15);
    CHECK(ds.truth.w.k() == 3);
    CHECK(ds.truth.component_k.size() == 3);
    CHECK_NOTHROW(ds.truth.params.validate());
    for (std::size_t s = 0; s < 3; ++s) {
        const auto ck = ds.truth.component_k[s];
        CHECK(ck >= 2);
        CHECK(ck <= 5);
        const auto slice = build_component_alpha(5, ck, ds.truth.link_maps[s], 0.99, 0.01);
        CHECK(ds.truth.params.alpha.slice(s).isApprox(slice));
    }
}

TEST_CASE("noise-free layers are the co-membership of the linked labels") {
    auto cfg = config(50, 15, 5, 3, 7);
    cfg.p_in = 1.0;
    cfg.p_out = 0.0;
    const auto ds = generate_dataset(cfg);
    for (std::size_t layer = 0; layer < 15; ++layer) {
        const auto& map = ds.truth.link_maps[ds.truth.w[layer]];
        std::vector<std::size_t> local;
        for (auto label : ds.truth.z.labels()) {
            local.push_back(map[label]);
        }
        const HardPartition expected(local, ds.truth.component_k[ds.truth.w[layer]]);
        for (std::size_t i = 0; i < 50; ++i) {
            for (std::size_t j = 0; j < 50; ++j) {
                CHECK(ds.graph(i, j, layer) == (i != j && local[i] == local[j]));
            }
        }
        CHECK(ari(components(ds.graph, layer), expected) == 1.0);
    }
}

TEST_CASE("single component with identity link map replicates Z") {
    auto cfg = config(30, 4, 3, 1, 2);
    cfg.p_in = 1.0;
    cfg.p_out = 0.0;
    cfg.component_k = std::vector<std::size_t>{3};
    const auto ds = generate_dataset(cfg);
    for (std::size_t layer = 0; layer < 4; ++layer) {
        CHECK(ari(components(ds.graph, layer), ds.truth.z) == 1.0);
    }
}

TEST_CASE("empirical within-block edge frequency approaches p_in") {
    auto cfg = config(200, 3, 4, 1, 9);
    cfg.p_in = 0.7;
    cfg.p_out = 0.05;
    const auto ds = generate_dataset(cfg);
    double within = 0, within_edges = 0, between = 0, between_edges = 0;
    const auto& map = ds.truth.link_maps[0];
    for (std::size_t layer = 0; layer < 3; ++layer) {
        for (std::size_t i = 0; i < 200; ++i) {
            for (std::size_t j = i + 1; j < 200; ++j) {
                const bool same = map[ds.truth.z[i]] == map[ds.truth.z[j]];
                (same ? within : between) += 1;
                (same ? within_edges : between_edges) += ds.graph(i, j, layer);
            }
        }
    }
    CHECK(std::abs(within_edges / within - 0.7) < 3 * std::sqrt(0.7 * 0.3 / within));
    CHECK(std::abs(between_edges / between - 0.05) < 3 * std::sqrt(0.05 * 0.95 / between));
}

TEST_CASE("large configuration is valid") {
    const auto ds = generate_dataset(config(200, 50, 10, 10, 3));
    CHECK(ds.graph.n() == 200);
    CHECK(ds.graph.v() == 50);
    for (std::size_t s = 0; s < 10; ++s) {
        const auto& map = ds.truth.link_maps[s];
        CHECK(std::set<std::size_t>(map.begin(), map.end()).size() == ds.truth.component_k[s]);
    }
}

TEST_CASE("generation is reproducible") {
    auto cfg = config(40, 6, 4, 2, 123);
    cfg.p_switch = 0.1;
    const auto a = generate_dataset(cfg);
    const auto b = generate_dataset(cfg);
    CHECK(a.graph == b.graph);
    CHECK(a.truth.z == b.truth.z);
    CHECK(a.truth.w == b.truth.w);
    CHECK(a.truth.link_maps == b.truth.link_maps);
    cfg.seed = 124;
    CHECK_FALSE(generate_dataset(cfg).graph == a.graph);
}

TEST_CASE("label switching perturbs the layers") {
    auto cfg = config(60, 4, 3, 1, 8);
    cfg.p_in = 1.0;
    cfg.p_out = 0.0;
    const auto clean = generate_dataset(cfg);
    cfg.p_switch = 0.1;
    const auto noisy = generate_dataset(cfg);
    CHECK(clean.truth.z == noisy.truth.z);
    CHECK_FALSE(clean.graph == noisy.graph);
}

TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(generate_dataset(config(10, 2, 1, 1, 0)), DomainError);
    CHECK_THROWS_AS(generate_dataset(config(0, 2, 2, 1, 0)), DomainError);
    auto cfg = config(10, 2, 3, 1, 0);
    cfg.p_switch = 1.5;
    CHECK_THROWS_AS(generate_dataset(cfg), DomainError);
    cfg = config(10, 2, 3, 2, 0);
    cfg.component_k = std::vector<std::size_t>{2};
    CHECK_THROWS_AS(generate_dataset(cfg), DomainError);
    cfg = config(10, 2, 3, 1, 0);
    cfg.pi = {0.5, 0.5};
    CHECK_THROWS_AS(generate_dataset(cfg), DomainError);
}
