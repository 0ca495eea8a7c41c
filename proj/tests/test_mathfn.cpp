#include "doctest.h"

#include <cmath>
#include <limits>

#include "mimisbm/errors.hpp"
#include "mimisbm/mathfn.hpp"

using namespace mimisbm;

namespace {

// x, digamma(x), log_gamma(x) from a 40-digit arbitrary-precision evaluation.
struct Reference {
    double x, psi, lgamma;
};

const Reference kTable[] = {
    {1e-06, -1000000.5772140200139, 13.815509980749431714},
    {0.001, -1000.5755719318102797, 6.9071788853838536617},
    {0.1, -10.423754940411076232, 2.252712651734205902},
    {0.5, -1.9635100260214234794, 0.57236494292470008707},
    {1, -0.57721566490153286061, 0.0},
    {1.5, 0.036489973978576520559, -0.12078223763524522235},
    {2, 0.42278433509846713939, 0.0},
    {2.5, 0.70315664064524318723, 0.28468287047291915963},
    {3.7, 1.1671535393615114409, 1.4280723266653881292},
    {5, 1.5061176684318004727, 3.1780538303479456196},
    {5.999, 1.7059363290792256036, 4.7857857157805569409},
    {6, 1.7061176684318004727, 4.7874917427820459942},
    {6.001, 1.7062989749946425648, 4.7891979511064917705},
    {10, 2.2517525890667211076, 12.801827480081469611},
    {17.25, 2.8185466769865570379, 31.37462231367768648},
    {100, 4.6001618527380874002, 359.13420536957539878},
    {1234.5, 7.1180162318279978433, 7550.5509010778948957},
    {1000000.0, 13.815510057964190771, 12815504.56914761166},
    {10000000000.0, 23.02585092989045684, 220258509288.81058147},
};

void check_close(double got, double want) {
    const double tol = 1e-13 * std::max(1.0, std::abs(want));
    CHECK(std::abs(got - want) <= tol);
}

}  // namespace

TEST_CASE("digamma known constants") {
    CHECK(mathfn::digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
    CHECK(mathfn::digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-13));
    CHECK(mathfn::digamma(2.0) == doctest::Approx(0.4227843350984671).epsilon(1e-13));
}

TEST_CASE("log_gamma known constants") {
    CHECK(std::abs(mathfn::log_gamma(1.0)) < 1e-13);
    CHECK(mathfn::log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-13));
    CHECK(mathfn::log_gamma(5.0) == doctest::Approx(3.1780538303479458).epsilon(1e-13));
}

TEST_CASE("log_beta") {
    CHECK(std::abs(mathfn::log_beta(1.0, 1.0)) < 1e-13);
    CHECK(mathfn::log_beta(0.5, 0.5) == doctest::Approx(1.1447298858494002).epsilon(1e-13));
    // Gamma(1.5) Gamma(0.5) / Gamma(2) = pi / 2
    CHECK(mathfn::log_beta(1.5, 0.5) == doctest::Approx(0.45158270528945486).epsilon(1e-13));
    CHECK(mathfn::log_beta(2.5, 7.0) == doctest::Approx(mathfn::log_beta(7.0, 2.5)).epsilon(1e-13));
}

TEST_CASE("agreement with arbitrary-precision reference") {
    for (const auto& r : kTable) {
        CAPTURE(r.x);
        check_close(mathfn::digamma(r.x), r.psi);
        check_close(mathfn::log_gamma(r.x), r.lgamma);
    }
}

TEST_CASE("recurrences on a log-spaced grid") {
    for (double e = -4.0; e <= 4.0; e += 0.125) {
        const double x = std::pow(10.0, e);
        CAPTURE(x);
        CHECK(std::abs(mathfn::digamma(x + 1.0) - mathfn::digamma(x) - 1.0 / x) < 1e-10);
        CHECK(std::abs(mathfn::log_gamma(x + 1.0) - mathfn::log_gamma(x) - std::log(x)) < 1e-10);
    }
}

TEST_CASE("digamma is the derivative of log_gamma") {
    for (double x = 0.5; x < 1000.0; x *= 1.7) {
        CAPTURE(x);
        const double h = 1e-5 * x;
        const double fd = (mathfn::log_gamma(x + h) - mathfn::log_gamma(x - h)) / (2 * h);
        CHECK(std::abs(fd - mathfn::digamma(x)) < 1e-6);
    }
}

TEST_CASE("non-positive arguments are rejected") {
    CHECK_THROWS_AS(mathfn::digamma(0.0), DomainError);
    CHECK_THROWS_AS(mathfn::digamma(-1.5), DomainError);
    CHECK_THROWS_AS(mathfn::log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(mathfn::log_gamma(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(mathfn::log_beta(1.0, -2.0), DomainError);
}
