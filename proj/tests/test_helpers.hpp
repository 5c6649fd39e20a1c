#pragma once

#include <cstdint>
#include <vector>

#include "rsqtsm/chain.hpp"
#include "rsqtsm/dynamics.hpp"
#include "rsqtsm/rng.hpp"

// Deterministic randomized fixtures shared by the unit and acceptance suites.
namespace testutil {

inline double uniform(std::uint64_t seed, std::uint64_t i, double lo, double hi) {
    return lo + (hi - lo) * rsqtsm::rng::uniform_at(seed, 0xFEED, i);
}

// Admissible parameter ranges: moderate volatilities and rate coefficients so
// that 1 - 2 c3 sigma^2 stays well above zero over the horizons tested.
inline rsqtsm::RegimeParams random_params(std::uint64_t seed, int num_regimes,
                                          bool affine = false) {
    std::vector<rsqtsm::RegimeParams::Regime> regimes;
    for (int i = 0; i < num_regimes; ++i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * 16;
        rsqtsm::RegimeParams::Regime r;
        r.kappa = uniform(seed, base + 0, -0.5, 0.5);
        r.mu = uniform(seed, base + 1, -1.05, 1.05);
        r.sigma = uniform(seed, base + 2, 0.05, 0.35);
        r.a0 = uniform(seed, base + 3, 0.0, 0.05);
        r.a1 = uniform(seed, base + 4, -0.05, 0.05);
        r.a2 = affine ? 0.0 : uniform(seed, base + 5, 0.0, 0.04);
        regimes.push_back(r);
    }
    return rsqtsm::RegimeParams(regimes);
}

inline rsqtsm::TransitionSchedule random_schedule(std::uint64_t seed, int num_regimes,
                                                  std::size_t steps) {
    std::vector<rsqtsm::TransitionMatrix> mats;
    for (std::size_t k = 0; k < steps; ++k) {
        rsqtsm::TransitionMatrix m;
        for (int i = 0; i < num_regimes; ++i) {
            std::vector<double> row;
            double sum = 0.0;
            for (int j = 0; j < num_regimes; ++j) {
                const double v =
                    0.05 + rsqtsm::rng::uniform_at(seed, 0xBEEF,
                                                   k * 1024 + static_cast<std::uint64_t>(i) * 32 +
                                                       static_cast<std::uint64_t>(j));
                row.push_back(v);
                sum += v;
            }
            for (auto& v : row) v /= sum;
            m.push_back(row);
        }
        mats.push_back(m);
    }
    return rsqtsm::TransitionSchedule(num_regimes, mats);
}

inline rsqtsm::ChainPath random_path(std::uint64_t seed, int num_regimes, int start_time,
                                     int length) {
    rsqtsm::ChainPath p;
    p.start_time = start_time;
    p.probability = 1.0;
    for (int j = 0; j < length; ++j)
        p.states.push_back(static_cast<int>(
            uniform(seed, 0x7000 + static_cast<std::uint64_t>(j), 0.0, 1.0) * num_regimes) %
            num_regimes);
    return p;
}

inline rsqtsm::ChainPath constant_path(int start_time, int length, int regime) {
    rsqtsm::ChainPath p;
    p.start_time = start_time;
    p.states.assign(static_cast<std::size_t>(length), regime);
    p.probability = 1.0;
    return p;
}

}  // namespace testutil
