#include "doctest.h"

#include <limits>

#include "mimisbm/metrics.hpp"
#include "mimisbm/rng.hpp"
#include "oracles.hpp"

using namespace mimisbm;

TEST_CASE("ari basics") {
    const HardPartition a({0, 0, 1, 1, 2}, 3);
    CHECK(ari(a, a) == 1.0);
    CHECK(ari(a, HardPartition({2, 2, 0, 0, 1}, 3)) == 1.0);
    CHECK(ari(HardPartition({0, 0, 1, 1}, 2), HardPartition({0, 0, 1, 2}, 3)) == doctest::Approx(4.0 / 7.0));
    CHECK_THROWS_AS(ari(a, HardPartition({0, 1}, 2)), DomainError);
}

TEST_CASE("ari degenerate denominators") {
    const auto one = HardPartition::constant(4);
    const HardPartition singletons({0, 1, 2, 3}, 4);
    CHECK(ari(one, one) == 1.0);
    CHECK(ari(singletons, singletons) == 1.0);
    CHECK(ari(one, singletons) == 0.0);
    CHECK(ari(HardPartition::constant(1), HardPartition::constant(1)) == 1.0);
}

TEST_CASE("ari against the pair-counting oracle") {
    Rng rng(12);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.below(12);
        const std::size_t ka = 1 + rng.below(5);
        const std::size_t kb = 1 + rng.below(5);
        std::vector<std::size_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.below(ka);
            b[i] = rng.below(kb);
        }
        CHECK(ari(HardPartition(a, ka), HardPartition(b, kb)) == doctest::Approx(oracle::ari_pairs(a, b)).epsilon(1e-12));
        CHECK(ari(HardPartition(a, ka), HardPartition(b, kb)) == ari(HardPartition(b, kb), HardPartition(a, ka)));
    }
}

TEST_CASE("map_assign") {
    Eigen::MatrixXd soft(3, 2);
    soft << 0.2, 0.8, 0.5, 0.5, 0.9, 0.1;
    const auto p = map_assign(soft);
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    CHECK(p[2] == 0);
    CHECK(p.k() == 2);
    const auto id = map_assign(Eigen::MatrixXd::Identity(4, 4));
    CHECK(id == HardPartition({0, 1, 2, 3}, 4));
}

namespace {

ModelParams params(std::vector<double> pi, std::vector<double> rho, std::size_t k) {
    ModelParams m;
    m.pi = Eigen::Map<Eigen::VectorXd>(pi.data(), static_cast<Eigen::Index>(pi.size()));
    m.rho = Eigen::Map<Eigen::VectorXd>(rho.data(), static_cast<Eigen::Index>(rho.size()));
    m.alpha = SymmetricBlockTensor(k, rho.size(), 0.5);
    return m;
}

}  // namespace

TEST_CASE("identifiability checks") {
    SUBCASE("constant alpha fails A1") {
        const auto rep = check_identifiability(params({0.5, 0.5}, {1.0}, 2), 8, 4);
        CHECK_FALSE(rep.a1);
        CHECK(rep.a1_gap == 0.0);
        CHECK_FALSE(rep.all());
    }
    SUBCASE("single cluster and component pass") {
        const auto rep = check_identifiability(params({1.0}, {1.0}, 1), 4, 2);
        CHECK(rep.a1);
        CHECK(rep.a2);
        CHECK(rep.a3);
        CHECK(rep.a4);
        CHECK(rep.a5);
        CHECK(rep.all());
        CHECK(rep.a1_gap == std::numeric_limits<double>::infinity());
    }
    SUBCASE("symmetric two-block counterexample") {
        auto m = params({0.5, 0.5}, {1.0}, 2);
        m.alpha(0, 0, 0) = 0.9;
        m.alpha(1, 1, 0) = 0.9;
        m.alpha(0, 1, 0) = 0.1;
        const auto rep = check_identifiability(m, 8, 4);
        REQUIRE(rep.a1_values.size() == 2);
        // r_k = sum_l pi_l alpha_kl rho
        CHECK(rep.a1_values[0] == doctest::Approx(0.5));
        CHECK(rep.a1_values[1] == doctest::Approx(0.5));
        CHECK_FALSE(rep.a1);
        CHECK(rep.a3);
        CHECK(rep.a4);
        // c_kl = {0.9, 0.1, 0.9} has a repeated value
        CHECK_FALSE(rep.a5);
    }
    SUBCASE("asymmetric parameters pass A1, A2, A5") {
        auto m = params({0.3, 0.7}, {0.4, 0.6}, 2);
        const double vals[2][3] = {{0.9, 0.2, 0.6}, {0.3, 0.05, 0.8}};
        for (std::size_t s = 0; s < 2; ++s) {
            m.alpha(0, 0, s) = vals[s][0];
            m.alpha(0, 1, s) = vals[s][1];
            m.alpha(1, 1, s) = vals[s][2];
        }
        const auto rep = check_identifiability(m, 20, 4);
        CHECK(rep.a1);
        CHECK(rep.a2);
        CHECK(rep.a5);
        // m_s = pi^T alpha_s pi
        const double m0 = 0.09 * 0.9 + 2 * 0.21 * 0.2 + 0.49 * 0.6;
        CHECK(rep.a2_values[0] == doctest::Approx(m0));
        CHECK(rep.all());
    }
    SUBCASE("size conditions") {
        const auto m = params({0.5, 0.5}, {0.5, 0.5}, 2);
        auto rep = check_identifiability(m, 3, 4);
        CHECK_FALSE(rep.a3);
        CHECK(rep.a3_v_only);
        CHECK_FALSE(rep.a4);
        rep = check_identifiability(m, 8, 3);
        CHECK_FALSE(rep.a3);
        CHECK_FALSE(rep.a3_v_only);
        CHECK(rep.a4);
    }
    SUBCASE("invalid parameters") {
        auto m = params({0.5, 0.6}, {1.0}, 2);
        CHECK_THROWS_AS(check_identifiability(m, 8, 4), DomainError);
    }
}
