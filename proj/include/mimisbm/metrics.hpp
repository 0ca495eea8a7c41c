#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mimisbm/core.hpp"

namespace mimisbm {

/// Hubert-Arabie adjusted Rand index from the contingency table.
/// Returns 1 when both partitions are trivial in the same way (the index is
/// 0/0), and 0 for any other zero denominator. Throws DomainError on a
/// length mismatch.
double ari(const HardPartition& a, const HardPartition& b);

/// Row-wise argmax, ties to the lowest column.
HardPartition map_assign(const Eigen::MatrixXd& soft);

/// Checks of the sufficient conditions for identifiability of (pi, rho, alpha).
///
///   A1  r_k = pi^T alpha_{k..} rho distinct over k
///   A2  m_s = pi^T alpha_{..s} pi distinct over s
///   A3  N >= 2K and V >= 2K  (a3_v_only: V >= 2K alone)
///   A4  N >= 4Q
///   A5  c_kl = alpha_{kl.} rho distinct over k <= l
///
/// "Distinct" means the minimum pairwise absolute gap exceeds `tol`. Gaps of
/// singleton families are +infinity.
struct IdentifiabilityReport {
    bool a1 = false;
    bool a2 = false;
    bool a3 = false;
    bool a3_v_only = false;
    bool a4 = false;
    bool a5 = false;
    double a1_gap = 0.0;
    double a2_gap = 0.0;
    double a5_gap = 0.0;
    std::vector<double> a1_values;
    std::vector<double> a2_values;
    std::vector<double> a5_values;

    bool all() const noexcept { return a1 && a2 && a3 && a4 && a5; }
};

IdentifiabilityReport check_identifiability(const ModelParams& params, std::size_t n, std::size_t v,
                                            double tol = 1e-9);

}  // namespace mimisbm
