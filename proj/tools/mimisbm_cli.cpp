// mimisbm command line: simulate, fit, select, eval.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mimisbm/mimisbm.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure {
    int code;
    std::string message;
};

int exit_code(mimi_status s) {
    switch (s) {
        case MIMI_ERR_PARSE:
        case MIMI_ERR_IO:
        case MIMI_ERR_INTERNAL:
            return kExitRuntime;
        default:
            return kExitUsage;
    }
}

void check(mimi_status s) {
    if (s != MIMI_OK) {
        throw Failure{exit_code(s), std::string(mimi_status_name(s)) + ": " + mimi_last_error()};
    }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using GraphPtr = std::unique_ptr<mimi_graph, Deleter<mimi_graph, mimi_graph_free>>;
using PartitionPtr = std::unique_ptr<mimi_partition, Deleter<mimi_partition, mimi_partition_free>>;
using DatasetPtr = std::unique_ptr<mimi_dataset, Deleter<mimi_dataset, mimi_dataset_free>>;
using FitPtr = std::unique_ptr<mimi_fit, Deleter<mimi_fit, mimi_fit_free>>;
using SelectionPtr = std::unique_ptr<mimi_selection, Deleter<mimi_selection, mimi_selection_free>>;

std::string out_path(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void make_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Failure{kExitRuntime, "cannot create output directory '" + dir + "': " + ec.message()};
    }
}

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

// Accepts "a..b" or a single "a".
bool parse_range(const std::string& text, Range& out) {
    auto parse = [](std::string_view s, std::size_t& v) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        if (!parse(text, out.lo)) {
            return false;
        }
        out.hi = out.lo;
        return true;
    }
    return parse(std::string_view(text).substr(0, dots), out.lo) &&
           parse(std::string_view(text).substr(dots + 2), out.hi) && out.lo <= out.hi;
}

struct FitFlags {
    double eps = 1e-6;
    std::size_t max_iter = 200;
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
    std::string init = "spectral";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--eps", eps, "ELBO change stopping threshold")->capture_default_str()->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", max_iter, "Maximum VBEM iterations")->capture_default_str()->check(CLI::PositiveNumber);
        cmd->add_option("--restarts", restarts, "Number of restarts")->capture_default_str()->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "Random seed")->envname("MIMISBM_SEED")->capture_default_str();
        cmd->add_option("--init", init, "Initialization")->capture_default_str()->check(CLI::IsMember({"random", "spectral"}));
    }

    mimi_fit_config config() const {
        mimi_fit_config cfg;
        mimi_fit_config_default(&cfg);
        cfg.eps = eps;
        cfg.max_iter = max_iter;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.init = init == "random" ? MIMI_INIT_RANDOM : MIMI_INIT_SPECTRAL;
        return cfg;
    }
};

void run_simulate(const mimi_sim_config& cfg, const std::string& out) {
    mimi_dataset* raw = nullptr;
    check(mimi_simulate(&cfg, &raw));
    DatasetPtr ds(raw);
    make_out_dir(out);
    check(mimi_graph_write(mimi_dataset_graph(ds.get()), out_path(out, "graph.mlg").c_str()));
    check(mimi_partition_write(mimi_dataset_z(ds.get()), out_path(out, "z_true.part").c_str()));
    check(mimi_partition_write(mimi_dataset_w(ds.get()), out_path(out, "w_true.part").c_str()));
    check(mimi_dataset_write_truth(ds.get(), out_path(out, "truth.json").c_str()));
    std::cout << "wrote " << out << "/{graph.mlg,z_true.part,w_true.part,truth.json}\n";
}

GraphPtr load_graph(const std::string& path, bool symmetrize) {
    mimi_graph* raw = nullptr;
    check(mimi_graph_read(path.c_str(), symmetrize ? 1 : 0, &raw));
    return GraphPtr(raw);
}

void run_fit(const std::string& graph_path, bool symmetrize, std::size_t k, std::size_t q, const FitFlags& flags,
             const std::string& out) {
    const GraphPtr g = load_graph(graph_path, symmetrize);
    const mimi_fit_config cfg = flags.config();
    mimi_fit* raw = nullptr;
    check(mimi_fit_run(g.get(), k, q, &cfg, &raw));
    FitPtr f(raw);
    make_out_dir(out);
    check(mimi_fit_write_report(f.get(), out_path(out, "fit.json").c_str()));
    check(mimi_partition_write(mimi_fit_z_map(f.get()), out_path(out, "z_map.part").c_str()));
    check(mimi_partition_write(mimi_fit_w_map(f.get()), out_path(out, "w_map.part").c_str()));
    char elbo[64];
    std::snprintf(elbo, sizeof elbo, "%.10g", mimi_fit_elbo(f.get()));
    std::cout << "elbo " << elbo << " iterations " << mimi_fit_iterations(f.get())
              << (mimi_fit_converged(f.get()) ? " converged" : " not converged") << '\n';
}

void run_select(const std::string& graph_path, bool symmetrize, const Range& kr, const Range& qr,
                const std::string& criterion, const FitFlags& flags, std::size_t jobs, const std::string& out) {
    const GraphPtr g = load_graph(graph_path, symmetrize);
    const mimi_fit_config cfg = flags.config();
    mimi_selection* raw = nullptr;
    check(mimi_select_run(g.get(), kr.lo, kr.hi, qr.lo, qr.hi, &cfg, jobs, &raw));
    SelectionPtr s(raw);
    make_out_dir(out);
    check(mimi_selection_write_json(s.get(), out_path(out, "select.json").c_str()));
    check(mimi_selection_write_csv(s.get(), out_path(out, "select.csv").c_str()));

    const std::vector<std::pair<std::string, mimi_criterion>> all = {
        {"ilvb", MIMI_CRITERION_ILVB},
        {"icl-exact", MIMI_CRITERION_ICL_EXACT},
        {"icl-var", MIMI_CRITERION_ICL_VARIATIONAL},
        {"icl-approx", MIMI_CRITERION_ICL_APPROX},
    };
    for (const auto& [name, c] : all) {
        if (criterion != "all" && criterion != name) {
            continue;
        }
        std::size_t k = 0;
        std::size_t q = 0;
        const mimi_status st = mimi_selection_chosen(s.get(), c, &k, &q);
        if (st == MIMI_ERR_NOT_FOUND) {
            std::cout << name << " none\n";
            continue;
        }
        check(st);
        std::cout << name << " K=" << k << " Q=" << q << '\n';
    }
}

void run_eval(const std::string& pred_path, const std::string& truth_path, const std::string& out) {
    mimi_partition* raw = nullptr;
    check(mimi_partition_read(pred_path.c_str(), &raw));
    PartitionPtr pred(raw);
    check(mimi_partition_read(truth_path.c_str(), &raw));
    PartitionPtr truth(raw);
    double score = 0.0;
    check(mimi_ari(pred.get(), truth.get(), &score));
    make_out_dir(out);
    nlohmann::ordered_json j;
    j["ari"] = score;
    j["n"] = mimi_partition_size(pred.get());
    j["k_pred"] = mimi_partition_k(pred.get());
    j["k_truth"] = mimi_partition_k(truth.get());
    const std::string path = out_path(out, "eval.json");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!(f << j.dump(2) << '\n')) {
        throw Failure{kExitRuntime, "cannot write '" + path + "'"};
    }
    std::cout << "ari " << nlohmann::json(score).dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixture of multilayer stochastic block models"};
    app.require_subcommand(1);

    mimi_sim_config sim;
    mimi_sim_config_default(&sim);
    std::string sim_out = ".";
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic multilayer network");
    simulate->add_option("--n", sim.n, "Number of observations")->required();
    simulate->add_option("--v", sim.v, "Number of views")->required();
    simulate->add_option("--k", sim.k, "Number of clusters")->required();
    simulate->add_option("--q", sim.q, "Number of view components")->required();
    simulate->add_option("--p-in", sim.p_in, "Within-cluster link probability")->capture_default_str();
    simulate->add_option("--p-out", sim.p_out, "Between-cluster link probability")->capture_default_str();
    simulate->add_option("--switch", sim.p_switch, "Label switching rate")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->envname("MIMISBM_SEED")->capture_default_str();
    simulate->add_option("--out", sim_out, "Output directory")->capture_default_str();

    std::string graph_path;
    bool symmetrize = false;
    std::size_t fit_k = 0;
    std::size_t fit_q = 0;
    FitFlags fit_flags;
    std::string fit_out = ".";
    auto* fit = app.add_subcommand("fit", "Fit one (K, Q) model");
    fit->add_option("--graph", graph_path, "MLG graph file")->required();
    fit->add_flag("--symmetrize", symmetrize, "Repair one-sided lower-triangle entries");
    fit->add_option("--k", fit_k, "Number of clusters")->required();
    fit->add_option("--q", fit_q, "Number of view components")->required();
    fit_flags.add_to(fit);
    fit->add_option("--out", fit_out, "Output directory")->capture_default_str();

    std::string k_range_text;
    std::string q_range_text;
    std::string criterion = "all";
    std::size_t jobs = 1;
    FitFlags select_flags;
    std::string select_out = ".";
    auto* select = app.add_subcommand("select", "Grid search over (K, Q)");
    select->add_option("--graph", graph_path, "MLG graph file")->required();
    select->add_flag("--symmetrize", symmetrize, "Repair one-sided lower-triangle entries");
    select->add_option("--k-range", k_range_text, "K range a..b")->required();
    select->add_option("--q-range", q_range_text, "Q range a..b")->required();
    select->add_option("--criterion", criterion, "Criterion to report")
        ->capture_default_str()
        ->check(CLI::IsMember({"ilvb", "icl-exact", "icl-var", "icl-approx", "all"}));
    select->add_option("--jobs", jobs, "Concurrent grid cells")->capture_default_str()->check(CLI::PositiveNumber);
    select_flags.add_to(select);
    select->add_option("--out", select_out, "Output directory")->capture_default_str();

    std::string pred_path;
    std::string truth_path;
    std::string eval_out = ".";
    auto* eval = app.add_subcommand("eval", "Adjusted Rand index of two partitions");
    eval->add_option("--pred", pred_path, "Predicted partition file")->required();
    eval->add_option("--truth", truth_path, "Reference partition file")->required();
    eval->add_option("--out", eval_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            run_simulate(sim, sim_out);
        } else if (fit->parsed()) {
            run_fit(graph_path, symmetrize, fit_k, fit_q, fit_flags, fit_out);
        } else if (select->parsed()) {
            Range kr;
            Range qr;
            if (!parse_range(k_range_text, kr) || !parse_range(q_range_text, qr)) {
                std::cerr << "error: ranges must look like a..b with a <= b\n";
                return kExitUsage;
            }
            run_select(graph_path, symmetrize, kr, qr, criterion, select_flags, jobs, select_out);
        } else if (eval->parsed()) {
            run_eval(pred_path, truth_path, eval_out);
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
