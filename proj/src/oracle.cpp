#include "rsqtsm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rsqtsm/detail/parallel.hpp"
#include "rsqtsm/quadrature.hpp"
#include "rsqtsm/recursion.hpp"
#include "rsqtsm/rng.hpp"
#include "rsqtsm/tolerances.hpp"

namespace rsqtsm {

const char* to_string(OracleTarget target) {
    switch (target) {
        case OracleTarget::conditional_price: return "conditional_price";
        case OracleTarget::unconditional_price: return "unconditional_price";
        case OracleTarget::gaussian_moment: return "gaussian_moment";
    }
    return "unknown";
}

OracleReport make_report(OracleTarget target, std::string label, double closed_form,
                         double oracle_value, double standard_error, double tolerance) {
    OracleReport r;
    r.target = target;
    r.label = std::move(label);
    r.closed_form = closed_form;
    r.oracle_value = oracle_value;
    r.standard_error = standard_error;
    r.tolerance_used = tolerance;
    r.pass = std::fabs(closed_form - oracle_value) <=
             std::max(tolerance, tol::kMcSigmas * standard_error);
    r.high_variance =
        standard_error > 0.0 && standard_error > tol::kHighVariance * std::fabs(oracle_value);
    return r;
}

namespace {

// exp(-sum of short rates) along a frozen regime path, shocks supplied by
// `shock(j)` for the step from time index j to j+1.
template <typename ShockFn>
double discount_along_path(const RegimeParams& params, const ChainPath& path, double s_start,
                           ShockFn&& shock) {
    double s = s_start;
    double rate_sum = 0.0;
    for (std::size_t j = 0; j < path.states.size(); ++j) {
        rate_sum += short_rate(params, path.states[j], s);
        if (j + 1 < path.states.size())
            s = asset_step(params, path.states[j], s, shock(j));
    }
    return std::exp(-rate_sum);
}

// Deterministic chunked accumulation: fixed chunk size, chunks merged in
// index order, so the result does not depend on the thread count.
constexpr std::uint64_t kMcChunk = 65536;

template <typename SampleFn>
detail::RunningStats accumulate_mc(std::uint64_t num_sims, int threads, SampleFn&& sample) {
    const std::uint64_t num_chunks = (num_sims + kMcChunk - 1) / kMcChunk;
    std::vector<detail::RunningStats> chunk_stats(num_chunks);
    detail::parallel_chunks(num_chunks, threads, [&](std::uint64_t chunk) {
        detail::RunningStats stats;
        const std::uint64_t end = std::min((chunk + 1) * kMcChunk, num_sims);
        for (std::uint64_t j = chunk * kMcChunk; j < end; ++j) stats.add(sample(j));
        chunk_stats[chunk] = stats;
    });
    detail::RunningStats total;
    for (const auto& s : chunk_stats) total.merge(s);
    return total;
}

}  // namespace

OracleReport mc_conditional_price(const RegimeParams& params, const ChainPath& path, double s,
                                  const McOptions& options) {
    if (options.num_sims < 1000)
        throw std::invalid_argument("conditional MC oracle needs at least 1000 simulations");
    const double closed_form = conditional_price(coefficient_schedule(params, path), s);

    const auto stats = accumulate_mc(options.num_sims, options.threads, [&](std::uint64_t j) {
        const std::uint64_t stream = rng::stream_id(rng::Purpose::mc_conditional, j);
        if (options.antithetic) {
            const double plus = discount_along_path(params, path, s, [&](std::size_t t) {
                return rng::normal_at(options.seed, stream, t);
            });
            const double minus = discount_along_path(params, path, s, [&](std::size_t t) {
                return -rng::normal_at(options.seed, stream, t);
            });
            return 0.5 * (plus + minus);
        }
        return discount_along_path(params, path, s, [&](std::size_t t) {
            return rng::normal_at(options.seed, stream, t);
        });
    });

    return make_report(OracleTarget::conditional_price, "mc conditional", closed_form, stats.mean,
                       stats.se_of_mean(), 0.0);
}

OracleReport mc_unconditional_price(const RegimeParams& params,
                                    const TransitionSchedule& schedule, const MarketState& state,
                                    int maturity, const McOptions& options,
                                    std::uint64_t max_paths) {
    if (options.num_sims < 1000)
        throw std::invalid_argument("unconditional MC oracle needs at least 1000 simulations");
    const double closed_form =
        bond_price(schedule, params, state, maturity, max_paths, options.threads).price;

    const auto stats = accumulate_mc(options.num_sims, options.threads, [&](std::uint64_t j) {
        const ChainPath path = simulate_chain_stream(
            schedule, state.time, state.regime, maturity, options.seed,
            rng::stream_id(rng::Purpose::mc_unconditional_chain, j));
        const std::uint64_t shock_stream =
            rng::stream_id(rng::Purpose::mc_unconditional_shocks, j);
        if (options.antithetic) {
            const double plus = discount_along_path(params, path, state.asset, [&](std::size_t t) {
                return rng::normal_at(options.seed, shock_stream, t);
            });
            const double minus =
                discount_along_path(params, path, state.asset, [&](std::size_t t) {
                    return -rng::normal_at(options.seed, shock_stream, t);
                });
            return 0.5 * (plus + minus);
        }
        return discount_along_path(params, path, state.asset, [&](std::size_t t) {
            return rng::normal_at(options.seed, shock_stream, t);
        });
    });

    return make_report(OracleTarget::unconditional_price, "mc unconditional", closed_form,
                       stats.mean, stats.se_of_mean(), 0.0);
}

namespace {

// Nested quadrature of the conditional price, one Gauss-Hermite level per
// period. Before the first integration at each level, the quadratic growth
// coefficient of the log-integrand in the shock is measured by an exact
// second difference at wide probes; at or above 1/2 the true integral is
// infinite and the level reports divergence instead of returning a finite
// but meaningless sum.
class NestedQuadrature {
public:
    NestedQuadrature(const RegimeParams& params, const ChainPath& path, const QuadratureRule& rule)
        : params_(params), path_(path), rule_(rule),
          probed_(path.states.size(), false) {}

    double price(std::size_t level, double s) {
        const int regime = path_.states[level];
        const double rate = short_rate(params_, regime, s);
        if (level + 1 == path_.states.size()) return std::exp(-rate);
        const auto& p = params_.regime(regime);
        const double base = p.kappa + p.mu * s;
        if (!probed_[level]) {
            probed_[level] = true;  // growth coefficient does not depend on s
            check_growth(level, base, p.sigma);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
            sum += rule_.weights[i] * price(level + 1, base + p.sigma * rule_.nodes[i]);
        return std::exp(-rate) * sum;
    }

private:
    void check_growth(std::size_t level, double base, double sigma) {
        constexpr double kProbe = 8.0;
        const double lo = std::log(price(level + 1, base - sigma * kProbe));
        const double mid = std::log(price(level + 1, base));
        const double hi = std::log(price(level + 1, base + sigma * kProbe));
        const double coeff = (lo + hi - 2.0 * mid) / (2.0 * kProbe * kProbe);
        if (!(coeff < 0.5 * (1.0 - 1e-9)))
            throw QuadratureDiverged(path_.start_time + static_cast<int>(level), coeff);
    }

    const RegimeParams& params_;
    const ChainPath& path_;
    const QuadratureRule& rule_;
    std::vector<bool> probed_;
};

}  // namespace

OracleReport quadrature_conditional_price(const RegimeParams& params, const ChainPath& path,
                                          double s, int nodes_per_level) {
    if (path.states.empty() || path.states.size() > 4)
        throw std::invalid_argument("quadrature oracle handles path lengths 1 to 4");
    if (nodes_per_level < 32)
        throw std::invalid_argument("quadrature oracle needs at least 32 nodes per level");

    const QuadratureRule rule = gauss_hermite_rule(nodes_per_level);
    NestedQuadrature nested(params, path, rule);
    const double oracle_value = nested.price(0, s);
    const double closed_form = conditional_price(coefficient_schedule(params, path), s);
    const double tolerance = tol::kQuadAgreement * std::max(1.0, std::fabs(closed_form));
    return make_report(OracleTarget::conditional_price, "quadrature conditional", closed_form,
                       oracle_value, 0.0, tolerance);
}

OracleReport check_gaussian_moment(double f, double g) {
    const double closed_form = gaussian_quad_expectation(f, g);  // throws for g >= 1/2
    const double decay = 1.0 - 2.0 * g;
    // choose L so the ignored tails are below e^-45 relative to the peak
    const double reach = 1.2 * (std::fabs(f) + std::sqrt(f * f + 90.0 * decay)) / decay;
    const double inv_sqrt_2pi = 0.3989422804014327;
    const auto integrand = [&](double x) {
        return inv_sqrt_2pi * std::exp((f - 0.5 * decay * x) * x);
    };
    const double oracle_value = adaptive_gauss_kronrod(integrand, -reach, reach, 1e-13, 0.0);
    const double tolerance = tol::kGaussMoment * std::max(1.0, std::fabs(closed_form));
    return make_report(OracleTarget::gaussian_moment, "gaussian moment", closed_form, oracle_value,
                       0.0, tolerance);
}

std::vector<OracleReport> validation_suite(const TransitionSchedule& schedule,
                                           const RegimeParams& params, const MarketState& state,
                                           int horizon, const SuiteOptions& options) {
    std::vector<OracleReport> reports;

    const struct { double f, g; } moment_grid[] = {
        {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.25}, {0.7, 0.3}, {-1.5, -0.5}, {1.2, 0.4}};
    for (const auto& m : moment_grid) {
        OracleReport r = check_gaussian_moment(m.f, m.g);
        r.label = "gaussian moment f=" + std::to_string(m.f) + " g=" + std::to_string(m.g);
        reports.push_back(std::move(r));
    }

    const int span = horizon - state.time;
    const int quad_len = std::min(span, 3);
    const int quad_start = horizon - quad_len;
    for (int i = 0; i < params.num_regimes(); ++i) {
        ChainPath constant;
        constant.start_time = quad_start;
        constant.states.assign(static_cast<std::size_t>(quad_len), i);
        constant.probability = 1.0;
        OracleReport r =
            quadrature_conditional_price(params, constant, state.asset, options.quad_nodes);
        r.label = "quadrature, constant regime " + std::to_string(i + 1);
        reports.push_back(std::move(r));
    }

    const ChainPath simulated =
        simulate_chain(schedule, state.time, state.regime, horizon, options.seed);
    ChainPath tail;
    tail.start_time = quad_start;
    tail.states.assign(simulated.states.end() - quad_len, simulated.states.end());
    tail.probability = 1.0;
    {
        OracleReport r = quadrature_conditional_price(params, tail, state.asset, options.quad_nodes);
        r.label = "quadrature, simulated path tail";
        reports.push_back(std::move(r));
    }

    McOptions mc;
    mc.num_sims = options.mc_sims;
    mc.seed = options.seed;
    mc.threads = options.threads;
    {
        OracleReport r = mc_conditional_price(params, simulated, state.asset, mc);
        r.label = "mc conditional, simulated path";
        reports.push_back(std::move(r));
    }
    {
        OracleReport r =
            mc_unconditional_price(params, schedule, state, horizon, mc, options.max_paths);
        r.label = "mc unconditional vs enumeration";
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace rsqtsm
