#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsqtsm/chain.hpp"
#include "rsqtsm/dynamics.hpp"
#include "rsqtsm/pricing.hpp"

// Independent brute-force verifiers for the closed-form engine: plain Monte
// Carlo of the defining discounted expectations and nested Gauss-Hermite
// quadrature at short horizons. None of them go through the backward
// recursion, so agreement is evidence, not tautology.
namespace rsqtsm {

enum class OracleTarget { conditional_price, unconditional_price, gaussian_moment };

const char* to_string(OracleTarget target);

struct OracleReport {
    OracleTarget target = OracleTarget::conditional_price;
    std::string label;
    double closed_form = 0.0;
    double oracle_value = 0.0;
    double standard_error = 0.0;  // zero for quadrature targets
    double tolerance_used = 0.0;
    bool pass = false;
    bool high_variance = false;  // SE/|mean| above tol::kHighVariance
};

// pass <=> |closed_form - oracle_value| <= max(tolerance, 4 * standard_error)
OracleReport make_report(OracleTarget target, std::string label, double closed_form,
                         double oracle_value, double standard_error, double tolerance);

struct McOptions {
    std::uint64_t num_sims = 100'000;  // antithetic: number of pairs
    std::uint64_t seed = 42;
    bool antithetic = true;
    int threads = 1;
};

// Sample average of exp(-sum r_t) over shock paths with the regime path
// frozen, against the closed-form conditional price.
OracleReport mc_conditional_price(const RegimeParams& params, const ChainPath& path, double s,
                                  const McOptions& options);

// Joint simulation of chain and shocks, against exact path enumeration.
OracleReport mc_unconditional_price(const RegimeParams& params,
                                    const TransitionSchedule& schedule, const MarketState& state,
                                    int maturity, const McOptions& options,
                                    std::uint64_t max_paths = kDefaultMaxPaths);

// Nested Gauss-Hermite evaluation of the conditional price (one integration
// level per period), against the closed form. Path length is capped at 4
// because cost grows as nodes^(length-1).
OracleReport quadrature_conditional_price(const RegimeParams& params, const ChainPath& path,
                                          double s, int nodes_per_level);

// Adaptive numerical integration of E[exp(f eps + g eps^2)] against the
// closed form; requires g < 1/2.
OracleReport check_gaussian_moment(double f, double g);

struct SuiteOptions {
    std::uint64_t seed = 42;
    std::uint64_t mc_sims = 100'000;
    std::uint64_t max_paths = kDefaultMaxPaths;
    int quad_nodes = 64;
    int threads = 1;
};

// The standard battery run by the CLI `validate` command: Gaussian-moment
// spot checks, per-regime and simulated-path quadrature at short horizon,
// conditional MC along a simulated path, and unconditional MC against exact
// enumeration.
std::vector<OracleReport> validation_suite(const TransitionSchedule& schedule,
                                           const RegimeParams& params, const MarketState& state,
                                           int horizon, const SuiteOptions& options);

}  // namespace rsqtsm
