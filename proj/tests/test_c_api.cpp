#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "mimisbm/mimisbm.h"

namespace fs = std::filesystem;

namespace {

std::string temp_path(const char* name) {
    const auto dir = fs::temp_directory_path() / "mimisbm_c_api_test";
    fs::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(mimi_version()) > 0);
    CHECK(std::string(mimi_status_name(MIMI_OK)) == "ok");
    CHECK(std::string(mimi_status_name(MIMI_ERR_PARSE)) == "parse error");
    CHECK(std::string(mimi_status_name(static_cast<mimi_status>(77))) == "unknown status");
}

TEST_CASE("null arguments") {
    mimi_graph* g = nullptr;
    CHECK(mimi_graph_read(nullptr, 0, &g) == MIMI_ERR_NULL);
    CHECK(mimi_graph_read("x", 0, nullptr) == MIMI_ERR_NULL);
    CHECK(std::strlen(mimi_last_error()) > 0);
    double x = 0;
    CHECK(mimi_ari(nullptr, nullptr, &x) == MIMI_ERR_NULL);
    CHECK(mimi_simulate(nullptr, nullptr) == MIMI_ERR_NULL);
    CHECK(mimi_graph_n(nullptr) == 0);
    CHECK(mimi_dataset_graph(nullptr) == nullptr);
    CHECK(std::isnan(mimi_fit_elbo(nullptr)));
    mimi_graph_free(nullptr);
    mimi_partition_free(nullptr);
    mimi_dataset_free(nullptr);
    mimi_fit_free(nullptr);
    mimi_selection_free(nullptr);
}

TEST_CASE("graphs") {
    const size_t edges[] = {0, 1, 0, 2, 3, 1, 1, 2, 1};
    mimi_graph* g = nullptr;
    REQUIRE(mimi_graph_from_edges(4, 2, edges, 3, &g) == MIMI_OK);
    CHECK(mimi_graph_n(g) == 4);
    CHECK(mimi_graph_v(g) == 2);
    CHECK(mimi_graph_edge_count(g) == 3);

    const auto path = temp_path("g.mlg");
    REQUIRE(mimi_graph_write(g, path.c_str()) == MIMI_OK);
    mimi_graph* back = nullptr;
    REQUIRE(mimi_graph_read(path.c_str(), 0, &back) == MIMI_OK);
    CHECK(mimi_graph_edge_count(back) == 3);
    mimi_graph_free(back);
    mimi_graph_free(g);

    const size_t loop[] = {1, 1, 0};
    mimi_graph* bad = nullptr;
    CHECK(mimi_graph_from_edges(4, 1, loop, 1, &bad) == MIMI_ERR_SELF_LOOP);
    CHECK(bad == nullptr);
    const size_t out_of_range[] = {0, 5, 0};
    CHECK(mimi_graph_from_edges(4, 1, out_of_range, 1, &bad) == MIMI_ERR_INDEX);
    CHECK(mimi_graph_read(temp_path("absent.mlg").c_str(), 0, &bad) == MIMI_ERR_IO);

    const auto broken = temp_path("broken.mlg");
    std::FILE* f = std::fopen(broken.c_str(), "w");
    std::fputs("3 1\n0 1\n", f);
    std::fclose(f);
    CHECK(mimi_graph_read(broken.c_str(), 0, &bad) == MIMI_ERR_PARSE);
    CHECK(std::string(mimi_last_error()).find("line 2") != std::string::npos);
}

TEST_CASE("partitions and ari") {
    const size_t a_labels[] = {0, 0, 1, 1};
    const size_t b_labels[] = {0, 0, 1, 2};
    mimi_partition *a = nullptr, *b = nullptr;
    REQUIRE(mimi_partition_create(a_labels, 4, 2, &a) == MIMI_OK);
    REQUIRE(mimi_partition_create(b_labels, 4, 3, &b) == MIMI_OK);
    CHECK(mimi_partition_size(a) == 4);
    CHECK(mimi_partition_k(b) == 3);
    double x = 0;
    REQUIRE(mimi_ari(a, b, &x) == MIMI_OK);
    CHECK(x == doctest::Approx(4.0 / 7.0));

    size_t out[4] = {9, 9, 9, 9};
    REQUIRE(mimi_partition_labels(b, out, 4) == MIMI_OK);
    CHECK(out[3] == 2);
    size_t head[2] = {9, 9};
    REQUIRE(mimi_partition_labels(b, head, 2) == MIMI_OK);
    CHECK(head[0] == 0);
    CHECK(head[1] == 0);

    const auto path = temp_path("b.part");
    REQUIRE(mimi_partition_write(b, path.c_str()) == MIMI_OK);
    mimi_partition* c = nullptr;
    REQUIRE(mimi_partition_read(path.c_str(), &c) == MIMI_OK);
    REQUIRE(mimi_ari(b, c, &x) == MIMI_OK);
    CHECK(x == 1.0);

    mimi_partition* bad = nullptr;
    const size_t too_big[] = {0, 3};
    CHECK(mimi_partition_create(too_big, 2, 2, &bad) == MIMI_ERR_DOMAIN);
    mimi_partition* shorter = nullptr;
    REQUIRE(mimi_partition_create(a_labels, 3, 2, &shorter) == MIMI_OK);
    CHECK(mimi_ari(a, shorter, &x) == MIMI_ERR_DOMAIN);

    mimi_partition_free(shorter);
    mimi_partition_free(c);
    mimi_partition_free(b);
    mimi_partition_free(a);
}

TEST_CASE("simulate, fit and select") {
    mimi_sim_config sim;
    mimi_sim_config_default(&sim);
    sim.n = 60;
    sim.v = 6;
    sim.k = 3;
    sim.q = 2;
    sim.seed = 9;
    mimi_dataset* ds = nullptr;
    REQUIRE(mimi_simulate(&sim, &ds) == MIMI_OK);
    const mimi_graph* g = mimi_dataset_graph(ds);
    CHECK(mimi_graph_n(g) == 60);
    CHECK(mimi_partition_size(mimi_dataset_z(ds)) == 60);
    CHECK(mimi_partition_size(mimi_dataset_w(ds)) == 6);
    CHECK(mimi_dataset_write_truth(ds, temp_path("truth.json").c_str()) == MIMI_OK);

    mimi_fit_config cfg;
    mimi_fit_config_default(&cfg);
    CHECK(cfg.eps == 1e-6);
    cfg.restarts = 3;
    cfg.init = MIMI_INIT_SPECTRAL;
    mimi_fit* f = nullptr;
    REQUIRE(mimi_fit_run(g, 3, 2, &cfg, &f) == MIMI_OK);
    CHECK(std::isfinite(mimi_fit_elbo(f)));
    CHECK(mimi_fit_iterations(f) >= 1);
    CHECK(mimi_partition_size(mimi_fit_z_map(f)) == 60);
    double x = 0;
    REQUIRE(mimi_ari(mimi_fit_z_map(f), mimi_dataset_z(ds), &x) == MIMI_OK);
    CHECK(x > 0.5);
    CHECK(mimi_fit_write_report(f, temp_path("fit.json").c_str()) == MIMI_OK);

    mimi_fit* again = nullptr;
    REQUIRE(mimi_fit_run(g, 3, 2, &cfg, &again) == MIMI_OK);
    CHECK(mimi_fit_elbo(again) == mimi_fit_elbo(f));
    mimi_fit_free(again);

    mimi_fit* bad = nullptr;
    CHECK(mimi_fit_run(g, 0, 2, &cfg, &bad) == MIMI_ERR_DOMAIN);
    CHECK(mimi_fit_run(g, 3, 7, &cfg, &bad) == MIMI_ERR_DOMAIN);

    mimi_selection* s = nullptr;
    cfg.restarts = 1;
    REQUIRE(mimi_select_run(g, 2, 3, 1, 2, &cfg, 2, &s) == MIMI_OK);
    size_t k = 0, q = 0;
    REQUIRE(mimi_selection_chosen(s, MIMI_CRITERION_ICL_EXACT, &k, &q) == MIMI_OK);
    CHECK(k >= 2);
    CHECK(k <= 3);
    double value = 0;
    REQUIRE(mimi_selection_value(s, k, q, MIMI_CRITERION_ICL_EXACT, &value) == MIMI_OK);
    CHECK(std::isfinite(value));
    CHECK(mimi_selection_value(s, 5, 1, MIMI_CRITERION_ILVB, &value) == MIMI_ERR_NOT_FOUND);
    CHECK(mimi_selection_write_json(s, temp_path("select.json").c_str()) == MIMI_OK);
    CHECK(mimi_selection_write_csv(s, temp_path("select.csv").c_str()) == MIMI_OK);
    CHECK(mimi_selection_write_csv(s, temp_path("nope/select.csv").c_str()) == MIMI_ERR_IO);
    mimi_selection_free(s);

    mimi_selection* empty = nullptr;
    CHECK(mimi_select_run(g, 3, 2, 1, 1, &cfg, 1, &empty) == MIMI_ERR_DOMAIN);

    mimi_fit_free(f);
    mimi_dataset_free(ds);

    sim.p_in = 1.5;
    CHECK(mimi_simulate(&sim, &ds) == MIMI_ERR_DOMAIN);
    fs::remove_all(fs::temp_directory_path() / "mimisbm_c_api_test");
}
