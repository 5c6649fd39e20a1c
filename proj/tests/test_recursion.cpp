#include "doctest.h"

#include <cmath>

#include "rsqtsm/oracle.hpp"
#include "rsqtsm/quadrature.hpp"
#include "rsqtsm/recursion.hpp"
#include "rsqtsm/tolerances.hpp"
#include "test_helpers.hpp"

using namespace rsqtsm;

TEST_CASE("gaussian_quad_expectation closed forms") {
    CHECK(gaussian_quad_expectation(0.0, 0.0) == 1.0);
    CHECK(gaussian_quad_expectation(1.0, 0.0) ==
          doctest::Approx(1.6487212707001282).epsilon(1e-14));
    CHECK(gaussian_quad_expectation(0.0, 0.25) ==
          doctest::Approx(1.4142135623730951).epsilon(1e-14));
}

TEST_CASE("gaussian_quad_expectation against adaptive integration") {
    // the defining integral, evaluated numerically, is the oracle
    for (const auto& [f, g] : {std::pair{0.7, 0.3}, {1.5, -0.8}, {-2.0, 0.45}, {0.0, 0.49}}) {
        const auto report = check_gaussian_moment(f, g);
        CHECK(report.pass);
        CHECK(std::fabs(report.closed_form - report.oracle_value) <=
              1e-10 * std::max(1.0, std::fabs(report.closed_form)));
    }
}

TEST_CASE("gaussian_quad_expectation diverges at g >= 1/2") {
    CHECK_THROWS_AS(gaussian_quad_expectation(0.0, 0.5), DivergentExpectation);
    CHECK_THROWS_AS(gaussian_quad_expectation(1.0, 0.7), DivergentExpectation);
    CHECK_NOTHROW(gaussian_quad_expectation(0.0, 0.4999));
}

TEST_CASE("gaussian_quad_expectation is monotone in g and bounded below") {
    for (int fi = 0; fi <= 4; ++fi) {
        const double f = -2.0 + fi;
        double prev = 0.0;
        for (int gi = 0; gi <= 9; ++gi) {
            const double g = 0.05 * gi;  // 0 to 0.45
            const double v = gaussian_quad_expectation(f, g);
            CHECK(v >= std::exp(0.5 * f * f) * (1.0 - 1e-14));
            if (gi > 0) CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("backward_step boundary identity from the terminal triple") {
    // stepping back from zeros must reproduce exp(-r): (-a0, -a1, -a2) exactly
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto params = testutil::random_params(900 + trial, 1);
        const auto& p = params.regime(0);
        const CoeffTriple c = backward_step(params, 0, CoeffTriple{});
        CHECK(c.c1 == -p.a0);
        CHECK(c.c2 == -p.a1);
        CHECK(c.c3 == -p.a2);
    }
}

TEST_CASE("backward_step with all rate coefficients zero is a fixed point") {
    RegimeParams params({{0.4, 0.9, 0.3, 0.0, 0.0, 0.0}});
    CoeffTriple c{};
    for (int i = 0; i < 20; ++i) c = backward_step(params, 0, c);
    CHECK(c.c1 == 0.0);
    CHECK(c.c2 == 0.0);
    CHECK(c.c3 == 0.0);
}

TEST_CASE("one-step oracle equivalence against 200-node quadrature") {
    // For random admissible (params, triple, s):
    //   exp(-r(s)) E[exp(c1 + c2 S' + c3 S'^2)],  S' = kappa + mu s + sigma eps
    // computed by Gauss-Hermite must equal the closed-form stepped triple.
    const QuadratureRule rule = gauss_hermite_rule(200);
    int checked = 0;
    for (std::uint64_t trial = 0; trial < 1200; ++trial) {
        const auto params = testutil::random_params(3000 + trial, 1);
        const auto& p = params.regime(0);
        CoeffTriple next;
        next.c1 = testutil::uniform(trial, 101, -0.5, 0.5);
        next.c2 = testutil::uniform(trial, 102, -0.5, 0.5);
        next.c3 = testutil::uniform(trial, 103, -0.3, 0.2);
        if (!(1.0 - 2.0 * next.c3 * p.sigma * p.sigma > 0.0)) continue;
        const double s = testutil::uniform(trial, 104, -2.0, 2.0);

        const CoeffTriple stepped = backward_step(params, 0, next);
        const double closed = std::exp(stepped.c1 + (stepped.c2 + stepped.c3 * s) * s);

        const double base = p.kappa + p.mu * s;
        double expectation = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double sp = base + p.sigma * rule.nodes[i];
            expectation += rule.weights[i] * std::exp(next.c1 + (next.c2 + next.c3 * sp) * sp);
        }
        const double oracle = std::exp(-short_rate(params, 0, s)) * expectation;
        CHECK(std::fabs(closed - oracle) <= tol::kQuadAgreement * std::fabs(oracle));
        ++checked;
    }
    CHECK(checked >= 1000);
}

TEST_CASE("coefficient_schedule shape and terminal conditions") {
    const auto params = testutil::random_params(77, 2);
    const auto path = testutil::random_path(8, 2, 3, 5);  // times 3..7
    const auto sched = coefficient_schedule(params, path);
    CHECK(sched.start_time == 3);
    REQUIRE(sched.triples.size() == 6);  // path length + 1
    CHECK(sched.triples.back().c1 == 0.0);
    CHECK(sched.triples.back().c2 == 0.0);
    CHECK(sched.triples.back().c3 == 0.0);
    // triple one period before maturity is forced to (-a0, -a1, -a2)
    const auto& last_regime = params.regime(path.states.back());
    const auto& t_last = sched.triples[sched.triples.size() - 2];
    CHECK(t_last.c1 == -last_regime.a0);
    CHECK(t_last.c2 == -last_regime.a1);
    CHECK(t_last.c3 == -last_regime.a2);
}

TEST_CASE("coefficient_schedule for a one-period path") {
    const auto params = testutil::random_params(42, 1);
    const auto& p = params.regime(0);
    const auto sched = coefficient_schedule(params, testutil::constant_path(4, 1, 0));
    REQUIRE(sched.triples.size() == 2);
    CHECK(sched.triples[0].c1 == -p.a0);
    CHECK(sched.triples[0].c2 == -p.a1);
    CHECK(sched.triples[0].c3 == -p.a2);
}

TEST_CASE("c3 vanishes identically when a2 is zero everywhere") {
    const auto params = testutil::random_params(55, 3, /*affine=*/true);
    const auto path = testutil::random_path(56, 3, 0, 8);
    const auto sched = coefficient_schedule(params, path);
    for (const auto& t : sched.triples) CHECK(t.c3 == 0.0);
}

TEST_CASE("coefficients depend on the regime path") {
    RegimeParams params({{0.1, 0.95, 0.2, 0.02, 0.01, 0.001},
                         {0.3, 0.80, 0.4, 0.04, -0.02, 0.004}});
    ChainPath alternating = testutil::constant_path(0, 4, 0);
    alternating.states = {0, 1, 0, 1};
    const auto a = coefficient_schedule(params, alternating);
    const auto b = coefficient_schedule(params, testutil::constant_path(0, 4, 0));
    const auto c = coefficient_schedule(params, testutil::constant_path(0, 4, 1));
    CHECK(a.front().c1 != b.front().c1);
    CHECK(a.front().c1 != c.front().c1);
    CHECK(b.front().c2 != c.front().c2);
}

TEST_CASE("affine_schedule examples") {
    // a1 = a2 = 0: deterministic discounting, c1 accumulates -a0
    {
        RegimeParams params({{0.2, 0.9, 0.3, 0.03, 0.0, 0.0}});
        const auto sched = affine_schedule(params, testutil::constant_path(0, 5, 0));
        for (std::size_t j = 0; j < sched.triples.size(); ++j) {
            CHECK(sched.triples[j].c2 == 0.0);
            CHECK(sched.triples[j].c3 == 0.0);
            CHECK(sched.triples[j].c1 ==
                  doctest::Approx(-0.03 * static_cast<double>(5 - j)).epsilon(1e-15));
        }
    }
    // mu = 1, a = (0, 0.01, 0): c2 accumulates linearly backward
    {
        RegimeParams params({{0.0, 1.0, 0.2, 0.0, 0.01, 0.0}});
        const auto sched = affine_schedule(params, testutil::constant_path(0, 6, 0));
        for (std::size_t j = 0; j < sched.triples.size(); ++j)
            CHECK(sched.triples[j].c2 ==
                  doctest::Approx(-0.01 * static_cast<double>(6 - j)).epsilon(1e-15));
    }
}

TEST_CASE("affine_schedule rejects quadratic parameters") {
    const auto params = testutil::random_params(60, 2);  // a2 > 0 almost surely
    CHECK_THROWS_AS(affine_schedule(params, testutil::constant_path(0, 3, 0)), NotAffine);
}

TEST_CASE("affine_schedule agrees with the general recursion when a2 = 0") {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(trial % 3);
        const auto params = testutil::random_params(7000 + trial, n, /*affine=*/true);
        const auto path = testutil::random_path(7100 + trial, n, 0, 6);
        const auto general = coefficient_schedule(params, path);
        const auto affine = affine_schedule(params, path);
        REQUIRE(general.triples.size() == affine.triples.size());
        for (std::size_t j = 0; j < general.triples.size(); ++j) {
            CHECK(std::fabs(general.triples[j].c1 - affine.triples[j].c1) <= tol::kExactAlgebra);
            CHECK(std::fabs(general.triples[j].c2 - affine.triples[j].c2) <= tol::kExactAlgebra);
            CHECK(general.triples[j].c3 == 0.0);
            CHECK(affine.triples[j].c3 == 0.0);
        }
    }
}

TEST_CASE("divergence is detected, reported with its time, and cured by a2 = 0") {
    // strongly negative a2 drives c3 positive; sigma = 0.8 then breaks
    // 1 - 2 c3 sigma^2 > 0 within a couple of steps
    RegimeParams params({{0.0, 1.0, 0.8, 0.01, 0.0, -3.0}});
    const auto path = testutil::constant_path(5, 4, 0);
    bool thrown = false;
    try {
        coefficient_schedule(params, path);
    } catch (const DivergentExpectation& e) {
        thrown = true;
        CHECK(e.time >= 5);
        CHECK(e.time < 9);
        CHECK(e.regime == 0);
    }
    CHECK(thrown);

    RegimeParams cured({{0.0, 1.0, 0.8, 0.01, 0.0, 0.0}});
    CHECK_NOTHROW(coefficient_schedule(cured, path));
}
