#include "mimisbm/mathfn.hpp"

#include <cmath>
#include <string>

#include "mimisbm/errors.hpp"

namespace mimisbm::mathfn {

namespace {

// Arguments below this are shifted upward by recurrence before the
// asymptotic series is applied.
constexpr double kAsymptoticThreshold = 6.0;

void require_positive(double x, const char* fn) {
    if (!(x > 0.0) || std::isnan(x)) {
        throw DomainError(std::string(fn) + " requires a positive argument, got " + std::to_string(x));
    }
}

}  // namespace

double digamma(double x) {
    require_positive(x, "digamma");
    if (std::isinf(x)) {
        return x;
    }
    double shift = 0.0;
    while (x < kAsymptoticThreshold) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // ln x - 1/(2x) - sum_n B_2n / (2n x^2n)
    const double series =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 - inv2 * (1.0 / 132 -
                                                inv2 * (691.0 / 32760 -
                                                         inv2 * (1.0 / 12 - inv2 * (3617.0 / 8160 -
                                                                                    inv2 * 43867.0 / 14364))))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    if (std::isinf(x)) {
        return x;
    }
    // ln Gamma(x) = ln Gamma(x + m) - ln(x (x+1) ... (x+m-1))
    double product = 1.0;
    while (x < kAsymptoticThreshold) {
        product *= x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Stirling series with Bernoulli coefficients B_2n / (2n (2n-1) x^(2n-1)).
    const double series =
        inv * (1.0 / 12 -
               inv2 * (1.0 / 360 -
                       inv2 * (1.0 / 1260 -
                               inv2 * (1.0 / 1680 -
                                       inv2 * (1.0 / 1188 -
                                               inv2 * (691.0 / 360360 -
                                                       inv2 * (1.0 / 156 - inv2 * (3617.0 / 122400 -
                                                                                   inv2 * 43867.0 / 244188))))))));
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series - std::log(product);
}

double log_beta(double a, double b) {
    require_positive(a, "log_beta");
    require_positive(b, "log_beta");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

}  // namespace mimisbm::mathfn
