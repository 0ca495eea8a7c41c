#include "cluster.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace mimisbm::detail {

namespace {

std::size_t nearest(const Eigen::MatrixXd& centers, const Eigen::VectorXd& x, double* dist) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        const double d = (centers.row(c).transpose() - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::size_t>(c);
        }
    }
    if (dist) {
        *dist = best_d;
    }
    return best;
}

// Draws an index with probability proportional to weights; uniform when all are zero.
std::size_t weighted_draw(const std::vector<double>& weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    if (!(total > 0.0)) {
        return rng.below(weights.size());
    }
    const double u = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) {
            last = i;
            cumulative += weights[i];
            if (u < cumulative) {
                return i;
            }
        }
    }
    return last;
}

}  // namespace

std::vector<std::size_t> kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng, std::size_t max_iter) {
    const auto m = static_cast<std::size_t>(points.rows());
    std::vector<std::size_t> labels(m, 0);
    if (k <= 1 || m == 0) {
        return labels;
    }
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd centers(kk, points.cols());

    // k-means++ seeding
    centers.row(0) = points.row(static_cast<Eigen::Index>(rng.below(m)));
    std::vector<double> d2(m);
    for (std::size_t i = 0; i < m; ++i) {
        d2[i] = (points.row(static_cast<Eigen::Index>(i)) - centers.row(0)).squaredNorm();
    }
    for (Eigen::Index c = 1; c < kk; ++c) {
        centers.row(c) = points.row(static_cast<Eigen::Index>(weighted_draw(d2, rng)));
        for (std::size_t i = 0; i < m; ++i) {
            d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) - centers.row(c)).squaredNorm());
        }
    }

    std::vector<double> dist(m);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t c = nearest(centers, points.row(static_cast<Eigen::Index>(i)).transpose(), &dist[i]);
            if (c != labels[i]) {
                labels[i] = c;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, points.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < m; ++i) {
            sums.row(static_cast<Eigen::Index>(labels[i])) += points.row(static_cast<Eigen::Index>(i));
            ++counts[labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centers.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
                continue;
            }
            // Empty cluster: move its center onto the point farthest from its own center.
            std::size_t far = 0;
            for (std::size_t i = 1; i < m; ++i) {
                if (dist[i] > dist[far]) {
                    far = i;
                }
            }
            centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
            dist[far] = 0.0;
        }
    }
    return labels;
}

Eigen::MatrixXd normalized_adjacency_eigenvectors(const Eigen::MatrixXd& adjacency) {
    const Eigen::VectorXd degree = adjacency.rowwise().sum();
    Eigen::VectorXd inv_sqrt(degree.size());
    for (Eigen::Index i = 0; i < degree.size(); ++i) {
        inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
    }
    const Eigen::MatrixXd normalized = inv_sqrt.asDiagonal() * adjacency * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized);
    // Eigen returns ascending eigenvalues; flip to descending.
    return solver.eigenvectors().rowwise().reverse();
}

std::vector<std::size_t> spectral_labels(const Eigen::MatrixXd& eigenvectors, std::size_t k, Rng& rng) {
    const auto kk = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), eigenvectors.cols());
    Eigen::MatrixXd embedding = eigenvectors.leftCols(kk);
    for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) {
            embedding.row(i) /= norm;
        }
    }
    return kmeans(embedding, k, rng);
}

}  // namespace mimisbm::detail
