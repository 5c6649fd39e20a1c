#include "rsqtsm/recursion.hpp"

#include <cmath>
#include <stdexcept>

namespace rsqtsm {

double gaussian_quad_expectation(double f, double g) {
    if (g >= 0.5) throw DivergentExpectation(g, -1, -1);
    const double den = 1.0 - 2.0 * g;
    return std::exp(0.5 * f * f / den) / std::sqrt(den);
}

CoeffTriple backward_step(const RegimeParams& params, int regime, const CoeffTriple& next) {
    const auto& p = params.regime(regime);
    const double sigma2 = p.sigma * p.sigma;
    const double two_g = 2.0 * next.c3 * sigma2;
    const double den = 1.0 - two_g;
    if (!(den > 0.0)) throw DivergentExpectation(next.c3 * sigma2, -1, regime);

    const double a = next.c2 + 2.0 * next.c3 * p.kappa;  // f = sigma * (a + 2 c3 mu S)
    CoeffTriple out;
    out.c3 = -p.a2 + next.c3 * (p.mu * p.mu) / den;
    out.c2 = -p.a1 + p.mu * a / den;
    out.c1 = -p.a0 + next.c1 + next.c2 * p.kappa + next.c3 * (p.kappa * p.kappa)
             - 0.5 * std::log1p(-two_g) + sigma2 * (a * a) / (2.0 * den);
    return out;
}

const CoeffTriple& CoeffSchedule::at_time(int time) const {
    if (time < start_time || time > end_time())
        throw TimeOutOfRange(time, "schedule covers [" + std::to_string(start_time) + ", " +
                                       std::to_string(end_time()) + "]");
    return triples[static_cast<std::size_t>(time - start_time)];
}

CoeffSchedule coefficient_schedule(const RegimeParams& params, const ChainPath& path) {
    if (path.states.empty()) throw std::invalid_argument("empty chain path");
    CoeffSchedule sched;
    sched.start_time = path.start_time;
    sched.path = path;
    sched.triples.assign(path.states.size() + 1, CoeffTriple{});
    for (std::size_t j = path.states.size(); j-- > 0;) {
        try {
            sched.triples[j] = backward_step(params, path.states[j], sched.triples[j + 1]);
        } catch (const DivergentExpectation& e) {
            throw DivergentExpectation(e.g, path.start_time + static_cast<int>(j), e.regime);
        }
    }
    return sched;
}

CoeffSchedule affine_schedule(const RegimeParams& params, const ChainPath& path) {
    if (path.states.empty()) throw std::invalid_argument("empty chain path");
    for (int s : path.states) {
        const double a2 = params.regime(s).a2;
        if (a2 != 0.0) throw NotAffine(s, a2);
    }
    CoeffSchedule sched;
    sched.start_time = path.start_time;
    sched.path = path;
    sched.triples.assign(path.states.size() + 1, CoeffTriple{});
    for (std::size_t j = path.states.size(); j-- > 0;) {
        const auto& p = params.regime(path.states[j]);
        const CoeffTriple& next = sched.triples[j + 1];
        const double sigma2 = p.sigma * p.sigma;
        CoeffTriple& out = sched.triples[j];
        out.c3 = 0.0;
        out.c2 = -p.a1 + p.mu * next.c2;
        out.c1 = -p.a0 + next.c1 + next.c2 * p.kappa + sigma2 * (next.c2 * next.c2) / 2.0;
    }
    return sched;
}

}  // namespace rsqtsm
