#pragma once

// Special functions used by the variational updates and the criteria.
// All throw DomainError for non-positive arguments.

namespace mimisbm::mathfn {

/// psi(x) = d/dx ln Gamma(x).
double digamma(double x);

/// ln Gamma(x).
double log_gamma(double x);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

}  // namespace mimisbm::mathfn
