#include "doctest.h"

#include <cmath>
#include <vector>

#include "rsqtsm/dynamics.hpp"

using namespace rsqtsm;

namespace {

struct ZeroNormals final : rng::NormalSource {
    double next() override { return 0.0; }
};

RegimeParams single(double kappa, double mu, double sigma, double a0, double a1, double a2) {
    return RegimeParams({{kappa, mu, sigma, a0, a1, a2}});
}

ChainPath constant_path(int start, int len, int regime) {
    ChainPath p;
    p.start_time = start;
    p.states.assign(static_cast<std::size_t>(len), regime);
    p.probability = 1.0;
    return p;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(single(0, 1, 0.0, 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(single(0, 1, -0.5, 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(single(std::nan(""), 1, 1, 0, 0, 0), std::invalid_argument);
    CHECK_NOTHROW(single(0.1, 0.9, 0.2, 0.01, 0.02, 0.003));
}

TEST_CASE("asset_step arithmetic") {
    const auto identity = single(0, 1, 1, 0, 0, 0);
    CHECK(asset_step(identity, 0, 2.0, 0.0) == 2.0);

    const auto p = single(0.5, 0.9, 0.2, 0, 0, 0);
    CHECK(asset_step(p, 0, 1.0, 1.0) == doctest::Approx(1.6).epsilon(1e-15));

    // flipping the shock mirrors the output around kappa + mu s
    const double up = asset_step(p, 0, 1.3, 0.7);
    const double dn = asset_step(p, 0, 1.3, -0.7);
    CHECK(up + dn == doctest::Approx(2.0 * (0.5 + 0.9 * 1.3)).epsilon(1e-15));
}

TEST_CASE("asset_step is affine in state and shock") {
    const auto p = single(0.3, 0.8, 0.4, 0, 0, 0);
    const double h = 0.5;
    for (double s : {-2.0, 0.0, 1.5}) {
        const double slope_s = (asset_step(p, 0, s + h, 0.2) - asset_step(p, 0, s, 0.2)) / h;
        CHECK(slope_s == doctest::Approx(0.8).epsilon(1e-12));
        const double slope_e = (asset_step(p, 0, s, 0.2 + h) - asset_step(p, 0, s, 0.2)) / h;
        CHECK(slope_e == doctest::Approx(0.4).epsilon(1e-12));
    }
}

TEST_CASE("short_rate quadratic form") {
    const auto flat = single(0, 1, 1, 0.03, 0, 0);
    CHECK(short_rate(flat, 0, -5.0) == 0.03);
    CHECK(short_rate(flat, 0, 17.0) == 0.03);

    const auto q = single(0, 1, 1, 0.01, 0.02, 0.005);
    CHECK(short_rate(q, 0, 2.0) == doctest::Approx(0.07).epsilon(1e-15));
    CHECK(short_rate(q, 0, 0.0) == 0.01);  // exactly a0 at s = 0

    // positive curvature with a1 = 0: minimum at s = 0
    const auto vertex = single(0, 1, 1, 0.02, 0.0, 0.004);
    CHECK(short_rate(vertex, 0, 0.0) < short_rate(vertex, 0, 0.5));
    CHECK(short_rate(vertex, 0, 0.0) < short_rate(vertex, 0, -0.5));
}

TEST_CASE("simulate_asset_path with zero shocks is deterministic dynamics") {
    const auto p = single(0.0, 1.0, 0.7, 0.01, 0.002, 0.0);
    ZeroNormals zeros;
    const auto path = constant_path(0, 6, 0);
    const auto pts = simulate_asset_path(p, path, 2.5, zeros);
    REQUIRE(pts.size() == 6);
    for (const auto& pt : pts) {
        CHECK(pt.asset == 2.5);  // kappa=0, mu=1, no shocks
        CHECK(pt.rate == doctest::Approx(0.01 + 0.002 * 2.5).epsilon(1e-15));
    }
    CHECK(pts.front().time == 0);
    CHECK(pts.back().time == 5);
}

TEST_CASE("iid standard normal increments when kappa=0, mu=0, sigma=1") {
    const auto p = single(0.0, 0.0, 1.0, 0, 0, 0);
    const int n = 100001;
    const auto path = constant_path(0, n, 0);
    const auto pts = simulate_asset_path(p, path, 0.0, std::uint64_t{2024});
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t j = 1; j < pts.size(); ++j) {
        sum += pts[j].asset;
        sum2 += pts[j].asset * pts[j].asset;
    }
    const double m = static_cast<double>(n - 1);
    CHECK(std::fabs(sum / m) <= 4.0 / std::sqrt(m));
    CHECK(std::fabs(sum2 / m - 1.0) <= 4.0 * std::sqrt(2.0 / m));
}

TEST_CASE("per-regime shock variance follows the regime path") {
    RegimeParams p({{0.0, 0.0, 0.1, 0, 0, 0}, {0.0, 0.0, 0.5, 0, 0, 0}});
    // alternating regimes: increments at even times use sigma=0.1, odd use 0.5
    const int n = 200000;
    ChainPath path;
    path.start_time = 0;
    path.probability = 1.0;
    for (int t = 0; t < n; ++t) path.states.push_back(t % 2);
    const auto pts = simulate_asset_path(p, path, 0.0, std::uint64_t{9});
    double var[2] = {0.0, 0.0};
    int count[2] = {0, 0};
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const int regime = path.states[j];
        var[regime] += pts[j + 1].asset * pts[j + 1].asset;  // mu = 0: S_{t+1} = sigma eps
        ++count[regime];
    }
    CHECK(std::fabs(var[0] / count[0] - 0.01) <= 0.05 * 0.01);
    CHECK(std::fabs(var[1] / count[1] - 0.25) <= 0.05 * 0.25);
}

TEST_CASE("equal seeds give bit-identical paths") {
    const auto p = single(0.1, 0.95, 0.3, 0.01, 0.01, 0.001);
    const auto path = constant_path(2, 9, 0);
    const auto a = simulate_asset_path(p, path, 1.0, std::uint64_t{5});
    const auto b = simulate_asset_path(p, path, 1.0, std::uint64_t{5});
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].asset == b[j].asset);
        CHECK(a[j].rate == b[j].rate);
    }
}
