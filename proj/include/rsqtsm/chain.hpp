#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsqtsm/errors.hpp"

namespace rsqtsm {

inline constexpr std::uint64_t kDefaultMaxPaths = 10'000'000;

using TransitionMatrix = std::vector<std::vector<double>>;

// Time-dependent one-period transition matrices Q_0 ... Q_{T-2}. Rows are the
// source regime: row i of Q_k is the law of the regime at k+1 given regime i
// at k. Regimes are 0-based inside the library; the config/CLI layer is
// 1-based. Construction validates row-stochasticity, so an instance is always
// a valid schedule.
class TransitionSchedule {
public:
    TransitionSchedule(int num_regimes, std::vector<TransitionMatrix> matrices);

    static TransitionSchedule constant(int num_regimes, const TransitionMatrix& matrix,
                                       std::size_t num_steps);

    int num_regimes() const { return num_regimes_; }
    std::size_t num_steps() const { return flat_.size(); }

    // q_{ij} of the matrix governing the transition from `time` to `time`+1.
    double prob(int time, int from, int to) const;

    const std::vector<double>& matrix(int time) const;  // row-major N*N

private:
    void check_time(int time) const;

    int num_regimes_;
    std::vector<std::vector<double>> flat_;
};

// A realized regime sequence (states at start_time .. start_time+len-1)
// together with its probability given the first state.
struct ChainPath {
    int start_time = 0;
    std::vector<int> states;
    double probability = 1.0;

    int end_time() const { return start_time + static_cast<int>(states.size()); }
};

// dist^T * Q_time. `dist` must sum to 1 within tolerance.
std::vector<double> step_distribution(const TransitionSchedule& schedule, int time,
                                      const std::vector<double>& dist);

// Sample states at start_time .. horizon-1 from the kernel, starting in
// start_regime. Deterministic for a fixed seed.
ChainPath simulate_chain(const TransitionSchedule& schedule, int start_time, int start_regime,
                         int horizon, std::uint64_t seed);

// Same, with an explicit stream id so callers can embed the draw in a wider
// Monte Carlo scheme without stream collisions.
ChainPath simulate_chain_stream(const TransitionSchedule& schedule, int start_time,
                                int start_regime, int horizon, std::uint64_t seed,
                                std::uint64_t stream);

// N^(horizon-1-start_time), saturating at 2^64-1.
std::uint64_t count_paths(int num_regimes, int start_time, int horizon);

// Lazy lexicographic enumeration of every path from (start_time, start_regime)
// to horizon. The first state is fixed; the remaining ones run through all
// N^(horizon-1-start_time) combinations in lexicographic order, which is part
// of the contract (reproducible reduction order). Memory stays O(horizon).
class PathEnumerator {
public:
    PathEnumerator(const TransitionSchedule& schedule, int start_time, int start_regime,
                   int horizon, std::uint64_t max_paths = kDefaultMaxPaths);

    std::optional<ChainPath> next();

    std::uint64_t total() const { return total_; }

    // Jump to the path of the given lexicographic rank; enables consumption
    // of contiguous blocks in parallel.
    void seek(std::uint64_t rank);

private:
    const TransitionSchedule* schedule_;
    int start_time_, start_regime_, horizon_;
    std::uint64_t total_, emitted_;
    std::vector<int> digits_;  // free states at times start_time+1 .. horizon-1
};

}  // namespace rsqtsm
