#include "rsqtsm/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace rsqtsm {

RegimeParams::RegimeParams(std::vector<Regime> regimes) : regimes_(std::move(regimes)) {
    if (regimes_.empty()) throw std::invalid_argument("need at least one regime");
    for (std::size_t i = 0; i < regimes_.size(); ++i) {
        const Regime& r = regimes_[i];
        if (!(r.sigma > 0.0))
            throw std::invalid_argument("sigma of regime " + std::to_string(i) +
                                        " must be positive");
        for (double v : {r.kappa, r.mu, r.sigma, r.a0, r.a1, r.a2})
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite parameter in regime " + std::to_string(i));
    }
}

const RegimeParams::Regime& RegimeParams::regime(int i) const {
    if (i < 0 || i >= num_regimes()) throw std::invalid_argument("regime index out of range");
    return regimes_[static_cast<std::size_t>(i)];
}

double asset_step(const RegimeParams& params, int regime, double s, double eps) {
    const auto& r = params.regime(regime);
    return r.kappa + r.mu * s + r.sigma * eps;
}

double short_rate(const RegimeParams& params, int regime, double s) {
    const auto& r = params.regime(regime);
    return r.a0 + r.a1 * s + r.a2 * s * s;
}

std::vector<PathPoint> simulate_asset_path(const RegimeParams& params, const ChainPath& path,
                                           double s_start, rng::NormalSource& shocks) {
    if (path.states.empty()) throw std::invalid_argument("empty chain path");
    std::vector<PathPoint> out;
    out.reserve(path.states.size());
    double s = s_start;
    for (std::size_t j = 0; j < path.states.size(); ++j) {
        const int t = path.start_time + static_cast<int>(j);
        const int regime = path.states[j];
        out.push_back({t, s, short_rate(params, regime, s)});
        if (j + 1 < path.states.size()) s = asset_step(params, regime, s, shocks.next());
    }
    return out;
}

std::vector<PathPoint> simulate_asset_path(const RegimeParams& params, const ChainPath& path,
                                           double s_start, std::uint64_t seed) {
    rng::PhiloxNormalStream shocks(seed, rng::stream_id(rng::Purpose::asset_shocks));
    return simulate_asset_path(params, path, s_start, shocks);
}

}  // namespace rsqtsm
