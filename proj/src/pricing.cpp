#include "rsqtsm/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rsqtsm/detail/parallel.hpp"
#include "rsqtsm/rng.hpp"

namespace rsqtsm {

const char* to_string(PriceMode mode) {
    return mode == PriceMode::exact_enumeration ? "exact_enumeration" : "chain_monte_carlo";
}

double conditional_price(const CoeffSchedule& schedule, double s) {
    const CoeffTriple& c = schedule.front();
    return std::exp(c.c1 + (c.c2 + c.c3 * s) * s);
}

double conditional_price_at(const CoeffSchedule& schedule, int time, double s) {
    const CoeffTriple& c = schedule.at_time(time);
    return std::exp(c.c1 + (c.c2 + c.c3 * s) * s);
}

namespace {

// Exhaustive enumeration fused with the coefficient recursion. The recursion
// runs backward from maturity, so coefficient triples are shared between
// paths with a common regime suffix, not a common prefix. The tree is
// therefore walked depth-first from time T-1 toward k, carrying the running
// triple: every tree node costs one backward step and the total work is one
// step per node, O(N^(T-1-k)) instead of O(N^(T-1-k) * (T-k)). Each leaf's
// term lands in a buffer slot addressed by the path's lexicographic rank, and
// the buffer is folded with a fixed pairwise reduction, so the result is
// bit-identical for any thread count.
class ExactPricer {
public:
    ExactPricer(const TransitionSchedule& schedule, const RegimeParams& params,
                const MarketState& state, int maturity, std::uint64_t total)
        : q_(schedule),
          params_(params),
          k_(state.time),
          maturity_(maturity),
          n_(schedule.num_regimes()),
          start_regime_(state.regime),
          s_(state.asset),
          buffer_(total, 0.0) {
        // place value of the digit at time t is N^(T-1-t)
        place_.assign(static_cast<std::size_t>(free_digits()) + 1, 1);
        for (std::size_t i = 1; i < place_.size(); ++i)
            place_[i] = place_[i - 1] * static_cast<std::uint64_t>(n_);
    }

    int free_digits() const { return maturity_ - 1 - k_; }

    double run(int threads) {
        if (free_digits() == 0) {
            single_path_leaf();
        } else {
            const int depth = split_depth(threads);
            std::uint64_t subtrees = 1;
            for (int i = 0; i < depth; ++i) subtrees *= static_cast<std::uint64_t>(n_);
            detail::parallel_chunks(subtrees, threads,
                                    [&](std::uint64_t m) { run_subtree(m, depth); });
        }
        if (!failures_.empty()) throw_canonical_failure();
        return detail::pairwise_sum(buffer_.data(), buffer_.size());
    }

private:
    struct Failure {
        std::uint64_t rank;  // minimal leaf rank under the failing node
        int time;
        int regime;
        double g;
        std::vector<int> suffix;  // states from `time` to T-1 in time order
    };

    std::uint64_t place(int time) const {
        return place_[static_cast<std::size_t>(maturity_ - 1 - time)];
    }

    int split_depth(int threads) const {
        if (threads <= 1) return 0;
        int depth = 0;
        std::uint64_t subtrees = 1;
        while (depth < free_digits() &&
               subtrees < 4 * static_cast<std::uint64_t>(threads)) {
            subtrees *= static_cast<std::uint64_t>(n_);
            ++depth;
        }
        return depth;
    }

    void single_path_leaf() {
        CoeffTriple terminal{};
        try {
            const CoeffTriple c = backward_step(params_, start_regime_, terminal);
            buffer_[0] = std::exp(c.c1 + (c.c2 + c.c3 * s_) * s_);
        } catch (const DivergentExpectation& e) {
            record_failure({0, k_, start_regime_, e.g, {start_regime_}});
        }
    }

    // Fix the digits at times T-1 .. T-depth according to subtree index m,
    // then walk the remaining levels depth-first.
    void run_subtree(std::uint64_t m, int depth) {
        CoeffTriple c{};
        double prob = 1.0;
        std::uint64_t rank = 0;
        int x_next = -1;
        std::vector<int> suffix;
        suffix.reserve(static_cast<std::size_t>(free_digits()) + 1);
        for (int j = 0; j < depth; ++j) {
            const int t = maturity_ - 1 - j;
            const int v = static_cast<int>((m / place(t)) % static_cast<std::uint64_t>(n_));
            try {
                c = backward_step(params_, v, c);
            } catch (const DivergentExpectation& e) {
                suffix.push_back(v);
                record_failure(make_failure(rank + static_cast<std::uint64_t>(v) * place(t), t, v,
                                            e.g, suffix));
                return;
            }
            if (t <= maturity_ - 2) prob *= q_.prob(t, v, x_next);
            rank += static_cast<std::uint64_t>(v) * place(t);
            suffix.push_back(v);
            x_next = v;
        }
        const int t_next = maturity_ - 1 - depth;
        if (t_next == k_)
            finish_leaf(c, x_next, prob, rank, suffix);
        else
            expand(t_next, x_next, c, prob, rank, suffix);
    }

    // Choose the state at time t given the triple and state at time t+1.
    void expand(int t, int x_next, const CoeffTriple& c_next, double prob, std::uint64_t rank,
                std::vector<int>& suffix) {
        for (int v = 0; v < n_; ++v) {
            CoeffTriple c_t;
            const std::uint64_t r = rank + static_cast<std::uint64_t>(v) * place(t);
            suffix.push_back(v);
            try {
                c_t = backward_step(params_, v, c_next);
            } catch (const DivergentExpectation& e) {
                record_failure(make_failure(r, t, v, e.g, suffix));
                suffix.pop_back();
                continue;
            }
            const double pr = (t <= maturity_ - 2) ? prob * q_.prob(t, v, x_next) : prob;
            if (t == k_ + 1)
                finish_leaf(c_t, v, pr, r, suffix);
            else
                expand(t - 1, v, c_t, pr, r, suffix);
            suffix.pop_back();
        }
    }

    void finish_leaf(const CoeffTriple& c_k1, int x_k1, double prob, std::uint64_t rank,
                     std::vector<int>& suffix) {
        try {
            const CoeffTriple c = backward_step(params_, start_regime_, c_k1);
            buffer_[rank] =
                prob * q_.prob(k_, start_regime_, x_k1) * std::exp(c.c1 + (c.c2 + c.c3 * s_) * s_);
        } catch (const DivergentExpectation& e) {
            suffix.push_back(start_regime_);
            record_failure(make_failure(rank, k_, start_regime_, e.g, suffix));
            suffix.pop_back();
        }
    }

    // `suffix` lists states from T-1 downward; the report wants time order.
    static Failure make_failure(std::uint64_t rank, int time, int regime, double g,
                                const std::vector<int>& suffix) {
        Failure f{rank, time, regime, g, suffix};
        std::reverse(f.suffix.begin(), f.suffix.end());
        return f;
    }

    void record_failure(Failure f) {
        std::lock_guard<std::mutex> lock(failure_mutex_);
        failures_.push_back(std::move(f));
    }

    [[noreturn]] void throw_canonical_failure() const {
        const Failure* best = &failures_.front();
        for (const Failure& f : failures_)
            if (f.rank < best->rank) best = &f;
        throw DivergentExpectation(best->g, best->time, best->regime, best->suffix);
    }

    const TransitionSchedule& q_;
    const RegimeParams& params_;
    int k_, maturity_, n_, start_regime_;
    double s_;
    std::vector<double> buffer_;
    std::vector<std::uint64_t> place_;
    std::vector<Failure> failures_;
    std::mutex failure_mutex_;
};

void check_pricing_inputs(const TransitionSchedule& schedule, const RegimeParams& params,
                          const MarketState& state, int maturity) {
    if (maturity < state.time) throw std::invalid_argument("maturity precedes valuation time");
    if (state.regime < 0 || state.regime >= schedule.num_regimes())
        throw std::invalid_argument("regime index out of range");
    if (schedule.num_regimes() != params.num_regimes())
        throw std::invalid_argument("transition schedule and parameters disagree on N");
    if (maturity - state.time >= 2 &&
        schedule.num_steps() < static_cast<std::size_t>(maturity - 1))
        throw TimeOutOfRange(maturity - 2, "schedule has " + std::to_string(schedule.num_steps()) +
                                               " matrices, pricing needs " +
                                               std::to_string(maturity - 1));
}

}  // namespace

PriceResult bond_price(const TransitionSchedule& schedule, const RegimeParams& params,
                       const MarketState& state, int maturity, std::uint64_t max_paths,
                       int threads) {
    check_pricing_inputs(schedule, params, state, maturity);
    PriceResult result;
    result.valuation_time = state.time;
    result.maturity = maturity;
    result.mode = PriceMode::exact_enumeration;
    if (maturity == state.time) {
        result.price = 1.0;
        result.num_paths_used = 0;
        return result;
    }
    const std::uint64_t total = count_paths(schedule.num_regimes(), state.time, maturity);
    if (total > max_paths) throw PathBudgetExceeded(total, max_paths);
    ExactPricer pricer(schedule, params, state, maturity, total);
    result.price = pricer.run(threads);
    result.num_paths_used = total;
    return result;
}

PriceResult bond_price_chain_mc(const TransitionSchedule& schedule, const RegimeParams& params,
                                const MarketState& state, int maturity, std::uint64_t num_paths,
                                std::uint64_t seed, int threads) {
    check_pricing_inputs(schedule, params, state, maturity);
    PriceResult result;
    result.valuation_time = state.time;
    result.maturity = maturity;
    result.mode = PriceMode::chain_monte_carlo;
    if (maturity == state.time) {
        result.price = 1.0;
        result.num_paths_used = 0;
        return result;
    }
    if (num_paths == 0) throw std::invalid_argument("need at least one simulated path");

    constexpr std::uint64_t kChunk = 65536;  // fixed so results ignore the thread count
    const std::uint64_t num_chunks = (num_paths + kChunk - 1) / kChunk;
    std::vector<detail::RunningStats> chunk_stats(num_chunks);
    std::mutex error_mutex;
    std::vector<std::pair<std::uint64_t, DivergentExpectation>> errors;

    detail::parallel_chunks(num_chunks, threads, [&](std::uint64_t chunk) {
        detail::RunningStats stats;
        const std::uint64_t begin = chunk * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, num_paths);
        for (std::uint64_t j = begin; j < end; ++j) {
            const ChainPath path = simulate_chain_stream(
                schedule, state.time, state.regime, maturity, seed,
                rng::stream_id(rng::Purpose::mc_chain_pricing, j));
            try {
                stats.add(conditional_price(coefficient_schedule(params, path), state.asset));
            } catch (const DivergentExpectation& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                errors.emplace_back(j, e);
                return;
            }
        }
        chunk_stats[chunk] = stats;
    });

    if (!errors.empty()) {
        auto it = std::min_element(errors.begin(), errors.end(),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        throw it->second;
    }

    detail::RunningStats total;
    for (const auto& s : chunk_stats) total.merge(s);
    result.price = total.mean;
    result.standard_error = total.se_of_mean();
    result.num_paths_used = num_paths;
    return result;
}

PriceResult price_with_options(const TransitionSchedule& schedule, const RegimeParams& params,
                               const MarketState& state, int maturity,
                               const PricingOptions& options) {
    if (options.mode == PriceMode::chain_monte_carlo)
        return bond_price_chain_mc(schedule, params, state, maturity, options.mc_paths,
                                   options.seed, options.threads);
    try {
        return bond_price(schedule, params, state, maturity, options.max_paths, options.threads);
    } catch (const PathBudgetExceeded&) {
        if (!options.mc_fallback) throw;
        return bond_price_chain_mc(schedule, params, state, maturity, options.mc_paths,
                                   options.seed, options.threads);
    }
}

YieldCurve yield_curve(const TransitionSchedule& schedule, const RegimeParams& params,
                       const MarketState& state, const std::vector<int>& maturities,
                       const PricingOptions& options) {
    if (maturities.empty()) throw std::invalid_argument("need at least one maturity");
    YieldCurve curve;
    curve.valuation_time = state.time;
    curve.points.reserve(maturities.size());
    for (std::size_t i = 0; i < maturities.size(); ++i) {
        const int maturity = maturities[i];
        if (maturity <= state.time)
            throw std::invalid_argument("maturity " + std::to_string(maturity) +
                                        " not beyond valuation time");
        if (i > 0 && maturity <= maturities[i - 1])
            throw std::invalid_argument("maturities must be strictly increasing");
        const PriceResult res = price_with_options(schedule, params, state, maturity, options);
        const double yield =
            -std::log(res.price) / static_cast<double>(maturity - state.time);
        curve.points.push_back({maturity, res.price, yield});
    }
    return curve;
}

}  // namespace rsqtsm
