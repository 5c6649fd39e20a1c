#pragma once

#include <cstdint>
#include <vector>

#include "rsqtsm/chain.hpp"
#include "rsqtsm/rng.hpp"

namespace rsqtsm {

// Per-regime model parameters for the asset recursion and the short rate:
//
//   S_{k+1} = kappa + mu * S_k + sigma * eps_{k+1},   eps iid N(0,1)
//   r_k     = a0 + a1 * S_k + a2 * S_k^2
//
// Parameters depend on time only through the regime in force at that time.
class RegimeParams {
public:
    struct Regime {
        double kappa = 0.0;
        double mu = 0.0;
        double sigma = 1.0;
        double a0 = 0.0;
        double a1 = 0.0;
        double a2 = 0.0;
    };

    explicit RegimeParams(std::vector<Regime> regimes);

    int num_regimes() const { return static_cast<int>(regimes_.size()); }
    const Regime& regime(int i) const;

private:
    std::vector<Regime> regimes_;
};

// Conditioning information at one point in time: (k, S_k, regime).
struct MarketState {
    int time = 0;
    double asset = 0.0;
    int regime = 0;
};

// kappa_i + mu_i * s + sigma_i * eps
double asset_step(const RegimeParams& params, int regime, double s, double eps);

// a0_i + a1_i * s + a2_i * s^2
double short_rate(const RegimeParams& params, int regime, double s);

struct PathPoint {
    int time;
    double asset;
    double rate;
};

// Asset and short rate along a fixed regime path, one point per time the path
// covers. Shocks come from `shocks`; the seeded overload uses a dedicated
// Philox stream and is bit-reproducible per seed.
std::vector<PathPoint> simulate_asset_path(const RegimeParams& params, const ChainPath& path,
                                           double s_start, rng::NormalSource& shocks);
std::vector<PathPoint> simulate_asset_path(const RegimeParams& params, const ChainPath& path,
                                           double s_start, std::uint64_t seed);

}  // namespace rsqtsm
