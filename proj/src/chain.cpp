#include "rsqtsm/chain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsqtsm/rng.hpp"
#include "rsqtsm/tolerances.hpp"

namespace rsqtsm {

TransitionSchedule::TransitionSchedule(int num_regimes, std::vector<TransitionMatrix> matrices)
    : num_regimes_(num_regimes) {
    if (num_regimes < 1) throw std::invalid_argument("num_regimes must be >= 1");
    const auto n = static_cast<std::size_t>(num_regimes);
    flat_.reserve(matrices.size());
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        const auto& m = matrices[k];
        if (m.size() != n) throw std::invalid_argument("transition matrix is not N x N");
        std::vector<double> flat(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i].size() != n) throw std::invalid_argument("transition matrix is not rectangular");
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double q = m[i][j];
                if (q < 0.0)
                    throw NegativeEntry(static_cast<int>(i), static_cast<int>(j),
                                        static_cast<int>(k), q);
                flat[i * n + j] = q;
                sum += q;
            }
            if (!(std::fabs(sum - 1.0) <= tol::kRowSum))
                throw RowSumViolation(static_cast<int>(i), static_cast<int>(k), sum);
        }
        flat_.push_back(std::move(flat));
    }
}

TransitionSchedule TransitionSchedule::constant(int num_regimes, const TransitionMatrix& matrix,
                                                std::size_t num_steps) {
    return TransitionSchedule(num_regimes,
                              std::vector<TransitionMatrix>(num_steps, matrix));
}

double TransitionSchedule::prob(int time, int from, int to) const {
    check_time(time);
    return flat_[static_cast<std::size_t>(time)]
                [static_cast<std::size_t>(from) * num_regimes_ + static_cast<std::size_t>(to)];
}

const std::vector<double>& TransitionSchedule::matrix(int time) const {
    check_time(time);
    return flat_[static_cast<std::size_t>(time)];
}

void TransitionSchedule::check_time(int time) const {
    if (time < 0 || static_cast<std::size_t>(time) >= flat_.size())
        throw TimeOutOfRange(time, "schedule has " + std::to_string(flat_.size()) + " matrices");
}

std::vector<double> step_distribution(const TransitionSchedule& schedule, int time,
                                      const std::vector<double>& dist) {
    const int n = schedule.num_regimes();
    if (dist.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("distribution has wrong dimension");
    double sum = 0.0;
    for (double p : dist) sum += p;
    if (!(std::fabs(sum - 1.0) <= tol::kDistSum))
        throw std::invalid_argument("distribution sums to " + std::to_string(sum));
    const auto& q = schedule.matrix(time);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(j)] +=
                dist[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i) * n + j];
    return out;
}

namespace {

int sample_row(const TransitionSchedule& schedule, int time, int from, double u) {
    const int n = schedule.num_regimes();
    double cum = 0.0;
    for (int j = 0; j < n; ++j) {
        cum += schedule.prob(time, from, j);
        if (u < cum) return j;
    }
    return n - 1;  // cumulative rounding: u landed at/above the last edge
}

}  // namespace

ChainPath simulate_chain_stream(const TransitionSchedule& schedule, int start_time,
                                int start_regime, int horizon, std::uint64_t seed,
                                std::uint64_t stream) {
    if (start_regime < 0 || start_regime >= schedule.num_regimes())
        throw std::invalid_argument("start regime out of range");
    if (start_time >= horizon)
        throw TimeOutOfRange(start_time, "start time must precede horizon");
    ChainPath path;
    path.start_time = start_time;
    path.states.reserve(static_cast<std::size_t>(horizon - start_time));
    path.states.push_back(start_regime);
    path.probability = 1.0;
    int state = start_regime;
    for (int t = start_time; t < horizon - 1; ++t) {
        const double u = rng::uniform_at(seed, stream, static_cast<std::uint64_t>(t - start_time));
        const int nxt = sample_row(schedule, t, state, u);
        path.probability *= schedule.prob(t, state, nxt);
        path.states.push_back(nxt);
        state = nxt;
    }
    return path;
}

ChainPath simulate_chain(const TransitionSchedule& schedule, int start_time, int start_regime,
                         int horizon, std::uint64_t seed) {
    return simulate_chain_stream(schedule, start_time, start_regime, horizon, seed,
                                 rng::stream_id(rng::Purpose::chain_simulation));
}

std::uint64_t count_paths(int num_regimes, int start_time, int horizon) {
    const int free_digits = horizon - 1 - start_time;
    if (free_digits < 0) throw TimeOutOfRange(start_time, "horizon must exceed start time");
    std::uint64_t count = 1;
    const auto n = static_cast<std::uint64_t>(num_regimes);
    for (int i = 0; i < free_digits; ++i) {
        if (count > std::numeric_limits<std::uint64_t>::max() / n)
            return std::numeric_limits<std::uint64_t>::max();
        count *= n;
    }
    return count;
}

PathEnumerator::PathEnumerator(const TransitionSchedule& schedule, int start_time,
                               int start_regime, int horizon, std::uint64_t max_paths)
    : schedule_(&schedule),
      start_time_(start_time),
      start_regime_(start_regime),
      horizon_(horizon),
      emitted_(0) {
    if (start_regime < 0 || start_regime >= schedule.num_regimes())
        throw std::invalid_argument("start regime out of range");
    total_ = count_paths(schedule.num_regimes(), start_time, horizon);
    if (total_ > max_paths) throw PathBudgetExceeded(total_, max_paths);
    digits_.assign(static_cast<std::size_t>(horizon - 1 - start_time), 0);
}

void PathEnumerator::seek(std::uint64_t rank) {
    emitted_ = rank;
    const auto n = static_cast<std::uint64_t>(schedule_->num_regimes());
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
        *it = static_cast<int>(rank % n);
        rank /= n;
    }
}

std::optional<ChainPath> PathEnumerator::next() {
    if (emitted_ >= total_) return std::nullopt;
    ChainPath path;
    path.start_time = start_time_;
    path.states.reserve(digits_.size() + 1);
    path.states.push_back(start_regime_);
    path.probability = 1.0;
    int prev = start_regime_;
    for (std::size_t d = 0; d < digits_.size(); ++d) {
        const int s = digits_[d];
        path.probability *= schedule_->prob(start_time_ + static_cast<int>(d), prev, s);
        path.states.push_back(s);
        prev = s;
    }
    ++emitted_;
    // lexicographic increment of the free digits
    const int n = schedule_->num_regimes();
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
        if (++*it < n) break;
        *it = 0;
    }
    return path;
}

}  // namespace rsqtsm
