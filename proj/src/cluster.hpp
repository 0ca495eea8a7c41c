#pragma once

// Internal clustering helpers used to build initial variational states.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mimisbm/rng.hpp"

namespace mimisbm::detail {

/// Lloyd's k-means with k-means++ seeding on the rows of `points`.
/// Returns one label in [0, k) per row. Deterministic given the rng state.
std::vector<std::size_t> kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng, std::size_t max_iter = 100);

/// Eigenvectors of the symmetric normalized adjacency D^-1/2 A D^-1/2,
/// columns ordered by decreasing eigenvalue. Isolated vertices get a zero row
/// in the normalization.
Eigen::MatrixXd normalized_adjacency_eigenvectors(const Eigen::MatrixXd& adjacency);

/// Normalized spectral clustering: rows of the leading k eigenvectors are
/// scaled to unit length and clustered with k-means.
std::vector<std::size_t> spectral_labels(const Eigen::MatrixXd& eigenvectors, std::size_t k, Rng& rng);

}  // namespace mimisbm::detail
