#include "mimisbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mimisbm {

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

double min_gap(std::vector<double> values) {
    if (values.size() < 2) {
        return std::numeric_limits<double>::infinity();
    }
    std::sort(values.begin(), values.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
        gap = std::min(gap, values[i] - values[i - 1]);
    }
    return gap;
}

}  // namespace

double ari(const HardPartition& a, const HardPartition& b) {
    if (a.size() != b.size()) {
        throw DomainError("partitions have different lengths (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    }
    std::vector<double> table(a.k() * b.k(), 0.0);
    std::vector<double> rows(a.k(), 0.0);
    std::vector<double> cols(b.k(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[a[i] * b.k() + b[i]] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    double index = 0.0;
    for (double c : table) {
        index += choose2(c);
    }
    double sum_rows = 0.0;
    for (double r : rows) {
        sum_rows += choose2(r);
    }
    double sum_cols = 0.0;
    for (double c : cols) {
        sum_cols += choose2(c);
    }
    const double total = choose2(static_cast<double>(a.size()));
    const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
    const double maximum = 0.5 * (sum_rows + sum_cols);
    const double numerator = index - expected;
    const double denominator = maximum - expected;
    if (denominator == 0.0) {
        return numerator == 0.0 ? 1.0 : 0.0;
    }
    return numerator / denominator;
}

HardPartition map_assign(const Eigen::MatrixXd& soft) {
    std::vector<std::size_t> labels(static_cast<std::size_t>(soft.rows()));
    for (Eigen::Index r = 0; r < soft.rows(); ++r) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < soft.cols(); ++c) {
            if (soft(r, c) > soft(r, best)) {
                best = c;
            }
        }
        labels[static_cast<std::size_t>(r)] = static_cast<std::size_t>(best);
    }
    return HardPartition(std::move(labels), static_cast<std::size_t>(soft.cols()));
}

IdentifiabilityReport check_identifiability(const ModelParams& params, std::size_t n, std::size_t v, double tol) {
    params.validate();
    const std::size_t k = params.k();
    const std::size_t q = params.q();
    IdentifiabilityReport rep;

    for (std::size_t a = 0; a < k; ++a) {
        double r = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            for (std::size_t s = 0; s < q; ++s) {
                r += params.pi[static_cast<Eigen::Index>(l)] * params.alpha(a, l, s) * params.rho[static_cast<Eigen::Index>(s)];
            }
        }
        rep.a1_values.push_back(r);
    }
    for (std::size_t s = 0; s < q; ++s) {
        double m = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t l = 0; l < k; ++l) {
                m += params.pi[static_cast<Eigen::Index>(a)] * params.alpha(a, l, s) * params.pi[static_cast<Eigen::Index>(l)];
            }
        }
        rep.a2_values.push_back(m);
    }
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t l = a; l < k; ++l) {
            double c = 0.0;
            for (std::size_t s = 0; s < q; ++s) {
                c += params.alpha(a, l, s) * params.rho[static_cast<Eigen::Index>(s)];
            }
            rep.a5_values.push_back(c);
        }
    }
    rep.a1_gap = min_gap(rep.a1_values);
    rep.a2_gap = min_gap(rep.a2_values);
    rep.a5_gap = min_gap(rep.a5_values);
    rep.a1 = rep.a1_gap > tol;
    rep.a2 = rep.a2_gap > tol;
    rep.a5 = rep.a5_gap > tol;
    rep.a3 = n >= 2 * k && v >= 2 * k;
    rep.a3_v_only = v >= 2 * k;
    rep.a4 = n >= 4 * q;
    return rep;
}

}  // namespace mimisbm
