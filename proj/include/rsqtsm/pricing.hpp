#pragma once

#include <cstdint>
#include <vector>

#include "rsqtsm/chain.hpp"
#include "rsqtsm/dynamics.hpp"
#include "rsqtsm/recursion.hpp"

namespace rsqtsm {

enum class PriceMode { exact_enumeration, chain_monte_carlo };

const char* to_string(PriceMode mode);

struct PriceResult {
    int valuation_time = 0;
    int maturity = 0;
    double price = 1.0;
    double standard_error = 0.0;  // zero for exact enumeration
    std::uint64_t num_paths_used = 0;
    PriceMode mode = PriceMode::exact_enumeration;
};

// exp(c1 + c2 s + c3 s^2) with the triple at the schedule's start time.
double conditional_price(const CoeffSchedule& schedule, double s);

// Same form evaluated with the triple at an arbitrary covered time; at the
// terminal time the triple is zero and the price is exactly 1.
double conditional_price_at(const CoeffSchedule& schedule, int time, double s);

// Unconditional price as the probability-weighted sum of conditional prices
// over every regime path from `state` to `maturity` (exact enumeration).
// Deterministic: terms are laid out by lexicographic path rank and folded
// with a fixed pairwise reduction, independent of the thread count.
PriceResult bond_price(const TransitionSchedule& schedule, const RegimeParams& params,
                       const MarketState& state, int maturity,
                       std::uint64_t max_paths = kDefaultMaxPaths, int threads = 1);

// Monte Carlo estimator of the same sum: averages the conditional price over
// simulated regime paths. Reports the standard error of the mean.
PriceResult bond_price_chain_mc(const TransitionSchedule& schedule, const RegimeParams& params,
                                const MarketState& state, int maturity, std::uint64_t num_paths,
                                std::uint64_t seed, int threads = 1);

struct PricingOptions {
    PriceMode mode = PriceMode::exact_enumeration;
    std::uint64_t max_paths = kDefaultMaxPaths;
    bool mc_fallback = false;  // opt-in: fall back to chain MC on budget overflow
    std::uint64_t mc_paths = 100'000;
    std::uint64_t seed = 42;
    int threads = 1;
};

// Mode/fallback dispatch used by the CLI.
PriceResult price_with_options(const TransitionSchedule& schedule, const RegimeParams& params,
                               const MarketState& state, int maturity,
                               const PricingOptions& options);

struct CurvePoint {
    int maturity = 0;
    double price = 1.0;
    double yield = 0.0;  // -ln(price) / (maturity - valuation time)
};

struct YieldCurve {
    int valuation_time = 0;
    std::vector<CurvePoint> points;
};

// Per-maturity bond prices and continuously compounded yields. Maturities
// must be strictly increasing and all beyond the valuation time.
YieldCurve yield_curve(const TransitionSchedule& schedule, const RegimeParams& params,
                       const MarketState& state, const std::vector<int>& maturities,
                       const PricingOptions& options);

}  // namespace rsqtsm
