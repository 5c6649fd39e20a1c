#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsqtsm/chain.hpp"
#include "rsqtsm/dynamics.hpp"
#include "rsqtsm/oracle.hpp"
#include "rsqtsm/pricing.hpp"
#include "rsqtsm/tolerances.hpp"

namespace rsqtsm {

struct EngineSettings {
    std::uint64_t max_paths = kDefaultMaxPaths;
    std::uint64_t mc_sims = 100'000;
    std::uint64_t seed = 42;
    double quad_tolerance = tol::kQuadAgreement;
    double exact_tolerance = tol::kExactAlgebra;
    bool mc_fallback = false;
    int threads = 1;
};

// A fully validated model description. Every instance passed chain and
// dynamics validation at load time; defaults are filled in so echoing a
// config always shows the effective settings. Regime indices are 1-based in
// the file format and 0-based here.
struct ModelConfig {
    int horizon;
    RegimeParams params;
    TransitionSchedule schedule;
    bool constant_transition;  // echo as one matrix instead of a per-step list
    MarketState initial;
    EngineSettings engine;

    PricingOptions pricing_options() const {
        PricingOptions o;
        o.max_paths = engine.max_paths;
        o.mc_fallback = engine.mc_fallback;
        o.mc_paths = engine.mc_sims;
        o.seed = engine.seed;
        o.threads = engine.threads;
        return o;
    }

    SuiteOptions suite_options() const {
        SuiteOptions o;
        o.seed = engine.seed;
        o.mc_sims = engine.mc_sims;
        o.max_paths = engine.max_paths;
        o.threads = engine.threads;
        return o;
    }
};

// Parse and validate a config from JSON text; `origin` names the source in
// error messages. Throws ParseError for malformed input and ValidationError
// (with the underlying chain/dynamics message) for semantic failures.
ModelConfig parse_config(const std::string& json_text, const std::string& origin);

ModelConfig load_config(const std::string& path);

// Normalized JSON with all defaults materialized; parsing it again yields a
// field-by-field identical config.
std::string echo_config(const ModelConfig& config);

}  // namespace rsqtsm
