#include "mimisbm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <system_error>
#include <vector>

#include "json.hpp"

namespace mimisbm::io {

namespace {

using json = nlohmann::ordered_json;

// Splits a line into whitespace-separated tokens. Returns false for blank and
// comment lines.
bool tokenize(const std::string& line, std::vector<std::string>& tokens) {
    tokens.clear();
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        if (tokens.empty() && tok[0] == '#') {
            return false;
        }
        tokens.push_back(tok);
    }
    return !tokens.empty();
}

std::size_t parse_count(const std::string& tok, std::size_t line) {
    std::size_t value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "expected a non-negative integer, got '" + tok + "'");
    }
    return value;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return in;
}

json number(double x) {
    // JSON has no representation for non-finite values.
    return std::isfinite(x) ? json(x) : json(nullptr);
}

double to_double(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i]));
    }
    return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(number(m(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

json tensor_json(const SymmetricBlockTensor& t) {
    json out = json::array();
    for (std::size_t s = 0; s < t.q(); ++s) {
        out.push_back(matrix_json(t.slice(s)));
    }
    return out;
}

json partition_json(const HardPartition& p) {
    return json{{"k", p.k()}, {"labels", std::vector<std::size_t>(p.labels().begin(), p.labels().end())}};
}

Eigen::VectorXd vector_from(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = to_double(j[i]);
    }
    return v;
}

Eigen::MatrixXd matrix_from(const json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) {
            throw ParseError(0, "ragged matrix in report");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_double(j[r][c]);
        }
    }
    return m;
}

SymmetricBlockTensor tensor_from(const json& j, std::size_t k) {
    SymmetricBlockTensor t(k, j.size());
    for (std::size_t s = 0; s < j.size(); ++s) {
        const Eigen::MatrixXd m = matrix_from(j[s]);
        if (static_cast<std::size_t>(m.rows()) != k || static_cast<std::size_t>(m.cols()) != k) {
            throw ParseError(0, "tensor slice has the wrong shape");
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a; b < k; ++b) {
                t(a, b, s) = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return t;
}

HardPartition partition_from(const json& j) {
    return HardPartition(j.at("labels").get<std::vector<std::size_t>>(), j.at("k").get<std::size_t>());
}

json values_json(const CriterionValues& v) {
    json out = json::object();
    for (Criterion c : kAllCriteria) {
        out[std::string(criterion_name(c))] = number(v.get(c));
    }
    return out;
}

template <typename F>
auto parse_json_document(const std::string& text, F&& build) {
    try {
        return build(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("invalid report: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(0, std::string("invalid report: ") + e.what());
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

MultilayerGraph parse_mlg(std::istream& in, bool symmetrize) {
    std::string line;
    std::vector<std::string> tokens;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t n = 0;
    std::size_t v = 0;
    // canonical (i < j, layer) -> first line it appeared on, per orientation
    std::map<Edge, std::size_t> upper;
    std::map<Edge, std::size_t> lower;
    while (std::getline(in, line)) {
        ++line_no;
        if (!tokenize(line, tokens)) {
            continue;
        }
        if (!have_header) {
            if (tokens.size() != 2) {
                throw ParseError(line_no, "header must be 'N V'");
            }
            n = parse_count(tokens[0], line_no);
            v = parse_count(tokens[1], line_no);
            have_header = true;
            continue;
        }
        if (tokens.size() != 3) {
            throw ParseError(line_no, "edge line must be 'i j v'");
        }
        const std::size_t i = parse_count(tokens[0], line_no);
        const std::size_t j = parse_count(tokens[1], line_no);
        const std::size_t layer = parse_count(tokens[2], line_no);
        if (i >= n || j >= n || layer >= v) {
            throw ParseError(line_no, "index out of range for N=" + std::to_string(n) + ", V=" + std::to_string(v));
        }
        if (i == j) {
            throw ParseError(line_no, "self-loop on observation " + std::to_string(i));
        }
        if (i < j) {
            upper.emplace(Edge{i, j, layer}, line_no);
        } else {
            lower.emplace(Edge{j, i, layer}, line_no);
        }
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 'N V' header");
    }
    if (!symmetrize && !lower.empty()) {
        // A file listing lower-triangle entries must list the full symmetric matrix.
        std::size_t bad_line = 0;
        for (const auto& [e, at] : upper) {
            if (!lower.count(e) && (bad_line == 0 || at < bad_line)) {
                bad_line = at;
            }
        }
        for (const auto& [e, at] : lower) {
            if (!upper.count(e) && (bad_line == 0 || at < bad_line)) {
                bad_line = at;
            }
        }
        if (bad_line) {
            throw ParseError(bad_line, "entry has no symmetric counterpart (use symmetrize to repair)");
        }
    }
    std::vector<Edge> edges;
    edges.reserve(upper.size() + lower.size());
    for (const auto& [e, at] : upper) {
        edges.push_back(e);
    }
    for (const auto& [e, at] : lower) {
        edges.push_back(e);
    }
    return build_graph(n, v, edges);
}

void format_mlg(std::ostream& out, const MultilayerGraph& g) {
    out << g.n() << ' ' << g.v() << '\n';
    for (const auto& e : g.edges()) {
        out << e.i << ' ' << e.j << ' ' << e.layer << '\n';
    }
}

MultilayerGraph read_mlg(const std::string& path, bool symmetrize) {
    auto in = open_in(path);
    return parse_mlg(in, symmetrize);
}

void write_mlg(const std::string& path, const MultilayerGraph& g) {
    std::ostringstream out;
    format_mlg(out, g);
    write_text(path, out.str());
}

HardPartition parse_partition(std::istream& in) {
    std::string line;
    std::vector<std::string> tokens;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t k = 0;
    std::vector<std::size_t> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (!tokenize(line, tokens)) {
            continue;
        }
        if (!have_header) {
            if (tokens.size() != 2 || tokens[0] != "k") {
                throw ParseError(line_no, "header must be 'k K'");
            }
            k = parse_count(tokens[1], line_no);
            if (k == 0) {
                throw ParseError(line_no, "K must be at least 1");
            }
            have_header = true;
            continue;
        }
        if (tokens.size() != 1) {
            throw ParseError(line_no, "expected one label per line");
        }
        const std::size_t label = parse_count(tokens[0], line_no);
        if (label >= k) {
            throw ParseError(line_no, "label " + std::to_string(label) + " is not below K=" + std::to_string(k));
        }
        labels.push_back(label);
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 'k K' header");
    }
    if (labels.empty()) {
        throw ParseError(line_no, "partition has no labels");
    }
    return HardPartition(std::move(labels), k);
}

void format_partition(std::ostream& out, const HardPartition& p) {
    out << "k " << p.k() << '\n';
    for (std::size_t label : p.labels()) {
        out << label << '\n';
    }
}

HardPartition read_partition(const std::string& path) {
    auto in = open_in(path);
    return parse_partition(in);
}

void write_partition(const std::string& path, const HardPartition& p) {
    std::ostringstream out;
    format_partition(out, p);
    write_text(path, out.str());
}

std::string fit_report_json(const FitReport& report) {
    const auto& st = report.state;
    json j;
    j["format"] = "mimisbm.fit/1";
    j["n"] = st.n();
    j["v"] = st.v();
    j["k"] = st.k();
    j["q"] = st.q();
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["best_restart"] = report.best_restart;
    j["elbo"] = number(report.elbo());
    j["elbo_trace"] = json::array();
    for (double x : report.elbo_trace) {
        j["elbo_trace"].push_back(number(x));
    }
    j["restart_elbos"] = json::array();
    for (double x : report.restart_elbos) {
        j["restart_elbos"].push_back(number(x));
    }
    j["z_map"] = partition_json(report.z_map);
    j["w_map"] = partition_json(report.w_map);
    j["state"] = json{{"tau", matrix_json(st.tau)}, {"nu", matrix_json(st.nu)},   {"beta", vector_json(st.beta)},
                      {"theta", vector_json(st.theta)}, {"eta", tensor_json(st.eta)}, {"xi", tensor_json(st.xi)}};
    return j.dump(2) + "\n";
}

FitReport parse_fit_report(const std::string& text) {
    return parse_json_document(text, [](const json& j) {
        if (j.at("format") != "mimisbm.fit/1") {
            throw ParseError(0, "not a fit report");
        }
        FitReport r;
        r.converged = j.at("converged").get<bool>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.best_restart = j.at("best_restart").get<std::size_t>();
        for (const auto& x : j.at("elbo_trace")) {
            r.elbo_trace.push_back(to_double(x));
        }
        for (const auto& x : j.at("restart_elbos")) {
            r.restart_elbos.push_back(to_double(x));
        }
        r.z_map = partition_from(j.at("z_map"));
        r.w_map = partition_from(j.at("w_map"));
        const auto& st = j.at("state");
        const auto k = j.at("k").get<std::size_t>();
        r.state.tau = matrix_from(st.at("tau"));
        r.state.nu = matrix_from(st.at("nu"));
        r.state.beta = vector_from(st.at("beta"));
        r.state.theta = vector_from(st.at("theta"));
        r.state.eta = tensor_from(st.at("eta"), k);
        r.state.xi = tensor_from(st.at("xi"), k);
        return r;
    });
}

std::string selection_json(const SelectionResult& result) {
    json j;
    j["format"] = "mimisbm.selection/1";
    j["n"] = result.n;
    j["v"] = result.v;
    j["k_range"] = {result.k_min, result.k_max};
    j["q_range"] = {result.q_min, result.q_max};
    j["cells"] = json::array();
    for (const auto& c : result.cells) {
        json cell;
        cell["k"] = c.k;
        cell["q"] = c.q;
        cell["ok"] = c.ok;
        cell["criteria"] = values_json(c.values);
        cell["iterations"] = c.iterations;
        cell["converged"] = c.converged;
        cell["best_restart"] = c.best_restart;
        if (!c.ok) {
            cell["error"] = c.error;
        }
        j["cells"].push_back(std::move(cell));
    }
    json chosen = json::object();
    for (Criterion c : kAllCriteria) {
        const auto& choice = result.chosen[static_cast<std::size_t>(c)];
        chosen[std::string(criterion_name(c))] = choice ? json{{"k", choice->k}, {"q", choice->q}} : json(nullptr);
    }
    j["chosen"] = std::move(chosen);
    return j.dump(2) + "\n";
}

SelectionResult parse_selection(const std::string& text) {
    return parse_json_document(text, [](const json& j) {
        if (j.at("format") != "mimisbm.selection/1") {
            throw ParseError(0, "not a selection report");
        }
        SelectionResult r;
        r.n = j.at("n").get<std::size_t>();
        r.v = j.at("v").get<std::size_t>();
        r.k_min = j.at("k_range").at(0).get<std::size_t>();
        r.k_max = j.at("k_range").at(1).get<std::size_t>();
        r.q_min = j.at("q_range").at(0).get<std::size_t>();
        r.q_max = j.at("q_range").at(1).get<std::size_t>();
        for (const auto& cj : j.at("cells")) {
            SelectionCell c;
            c.k = cj.at("k").get<std::size_t>();
            c.q = cj.at("q").get<std::size_t>();
            c.ok = cj.at("ok").get<bool>();
            const auto& crit = cj.at("criteria");
            c.values.ilvb = to_double(crit.at("ilvb"));
            c.values.icl_exact = to_double(crit.at("icl_exact"));
            c.values.icl_variational = to_double(crit.at("icl_variational"));
            c.values.icl_approx = to_double(crit.at("icl_approx"));
            c.iterations = cj.at("iterations").get<std::size_t>();
            c.converged = cj.at("converged").get<bool>();
            c.best_restart = cj.at("best_restart").get<std::size_t>();
            if (cj.contains("error")) {
                c.error = cj.at("error").get<std::string>();
            }
            r.cells.push_back(std::move(c));
        }
        for (Criterion c : kAllCriteria) {
            const auto& cj = j.at("chosen").at(std::string(criterion_name(c)));
            if (!cj.is_null()) {
                r.chosen[static_cast<std::size_t>(c)] = GridChoice{cj.at("k").get<std::size_t>(), cj.at("q").get<std::size_t>()};
            }
        }
        return r;
    });
}

std::string truth_json(const SimulationConfig& cfg, const GroundTruth& truth) {
    json j;
    j["format"] = "mimisbm.truth/1";
    j["config"] = json{{"n", cfg.n},           {"v", cfg.v},         {"k", cfg.k},
                       {"q", cfg.q},           {"p_in", cfg.p_in},   {"p_out", cfg.p_out},
                       {"p_switch", cfg.p_switch}, {"seed", cfg.seed}};
    j["pi"] = vector_json(truth.params.pi);
    j["rho"] = vector_json(truth.params.rho);
    j["alpha"] = tensor_json(truth.params.alpha);
    j["component_k"] = truth.component_k;
    j["link_maps"] = truth.link_maps;
    j["z"] = partition_json(truth.z);
    j["w"] = partition_json(truth.w);
    return j.dump(2) + "\n";
}

std::string selection_csv(const SelectionResult& result) {
    std::ostringstream out;
    out << "k,q,ok";
    for (Criterion c : kAllCriteria) {
        out << ',' << criterion_name(c);
    }
    out << '\n';
    for (const auto& cell : result.cells) {
        out << cell.k << ',' << cell.q << ',' << (cell.ok ? 1 : 0);
        for (Criterion c : kAllCriteria) {
            out << ',';
            const double x = cell.values.get(c);
            if (cell.ok && std::isfinite(x)) {
                out << format_double(x);
            }
        }
        out << '\n';
    }
    return out.str();
}

void write_report(const std::string& path, const FitReport& report) { write_text(path, fit_report_json(report)); }

void write_report(const std::string& path, const SelectionResult& result) {
    write_text(path, selection_json(result));
}

FitReport read_fit_report(const std::string& path) { return parse_fit_report(read_text(path)); }

SelectionResult read_selection(const std::string& path) { return parse_selection(read_text(path)); }

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mimisbm::io
