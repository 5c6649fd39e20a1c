#include "doctest.h"

#include <cmath>

#include "rsqtsm/quadrature.hpp"
#include "rsqtsm/recursion.hpp"

using namespace rsqtsm;

TEST_CASE("gauss_hermite_rule reproduces the 2- and 3-node closed forms") {
    // normalized for the standard normal weight: n=2 has nodes +-1 with
    // weights 1/2; n=3 has nodes 0, +-sqrt(3) with weights 2/3 and 1/6
    const auto r2 = gauss_hermite_rule(2);
    REQUIRE(r2.nodes.size() == 2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-14));

    const auto r3 = gauss_hermite_rule(3);
    REQUIRE(r3.nodes.size() == 3);
    CHECK(r3.nodes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
    CHECK(std::fabs(r3.nodes[1]) <= 1e-14);
    CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r3.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(r3.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("gauss_hermite_rule integrates normal moments exactly") {
    for (int n : {8, 20, 64, 200}) {
        const auto rule = gauss_hermite_rule(n);
        double w = 0.0, m2 = 0.0, m4 = 0.0, m6 = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = rule.nodes[i];
            w += rule.weights[i];
            m2 += rule.weights[i] * x * x;
            m4 += rule.weights[i] * x * x * x * x;
            m6 += rule.weights[i] * x * x * x * x * x * x;
        }
        CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(m6 == doctest::Approx(15.0).epsilon(1e-11));
    }
}

TEST_CASE("gauss_hermite_rule reproduces the gaussian quadratic moment") {
    const auto rule = gauss_hermite_rule(64);
    for (const auto& [f, g] : {std::pair{0.3, 0.1}, {0.7, 0.3}, {-1.0, -0.4}, {0.0, 0.25}}) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * std::exp((f + g * rule.nodes[i]) * rule.nodes[i]);
        CHECK(std::fabs(sum - gaussian_quad_expectation(f, g)) <=
              1e-10 * gaussian_quad_expectation(f, g));
    }
}

TEST_CASE("adaptive Gauss-Kronrod on known integrals") {
    const double pi = 3.14159265358979323846;
    // polynomials are exact
    CHECK(adaptive_gauss_kronrod([](double x) { return x * x; }, 0.0, 1.0, 1e-13, 0.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    // standard normal density integrates to ~1 over a wide interval
    const auto phi = [&](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); };
    CHECK(adaptive_gauss_kronrod(phi, -10.0, 10.0, 1e-13, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // a peaked integrand needs refinement: N(0, 0.01) density over [-8, 8]
    const auto peaked = [&](double x) { return std::exp(-0.5 * x * x / 1e-4) / (0.01 * std::sqrt(2.0 * pi)); };
    CHECK(adaptive_gauss_kronrod(peaked, -8.0, 8.0, 1e-12, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-11));
    // oscillatory sanity: integral of sin over [0, pi] is 2
    CHECK(adaptive_gauss_kronrod([](double x) { return std::sin(x); }, 0.0, pi, 1e-13, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-14));
}
