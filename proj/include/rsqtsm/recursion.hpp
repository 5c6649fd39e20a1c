#pragma once

#include <vector>

#include "rsqtsm/chain.hpp"
#include "rsqtsm/dynamics.hpp"

namespace rsqtsm {

// Conditional on a known regime path, the bond price is exponential-quadratic
// in the asset:
//
//   P(n, T) = exp(c1_n + c2_n * S_n + c3_n * S_n^2),  c1_T = c2_T = c3_T = 0.
//
// One backward step per period follows from the Gaussian moment
// E[exp(f eps + g eps^2)] = (1 - 2g)^{-1/2} exp(f^2 / (2 (1 - 2g))) applied to
// S_n = kappa + mu S_{n-1} + sigma eps_n, with g = c3_n sigma^2 and
// f = sigma (c2_n + 2 c3_n (kappa + mu S_{n-1})). Collecting powers of S_{n-1}
// (see docs/recursion-derivation.md):
//
//   c3_{n-1} = -a2 + c3_n mu^2 / (1 - 2 c3_n sigma^2)
//   c2_{n-1} = -a1 + mu (c2_n + 2 c3_n kappa) / (1 - 2 c3_n sigma^2)
//   c1_{n-1} = -a0 + c1_n + c2_n kappa + c3_n kappa^2
//              - 1/2 ln(1 - 2 c3_n sigma^2)
//              + sigma^2 (c2_n + 2 c3_n kappa)^2 / (2 (1 - 2 c3_n sigma^2))
//
// with all parameters read from the regime in force at n-1. The one-step
// identity P(n-1) = exp(-r_{n-1}) E[P(n) | S_{n-1}] is checked against
// independent quadrature and Monte Carlo oracles by the test suite.

struct CoeffTriple {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

// E[exp(f eps + g eps^2)] for eps ~ N(0,1); requires g < 1/2.
double gaussian_quad_expectation(double f, double g);

// Triple at n-1 from the triple at n and the regime in force at n-1.
CoeffTriple backward_step(const RegimeParams& params, int regime, const CoeffTriple& next);

// Coefficient triples for every time the path covers, plus the terminal zero
// triple; triples[j] belongs to time start_time + j.
struct CoeffSchedule {
    int start_time = 0;
    std::vector<CoeffTriple> triples;
    ChainPath path;

    const CoeffTriple& front() const { return triples.front(); }
    const CoeffTriple& at_time(int time) const;
    int end_time() const { return start_time + static_cast<int>(triples.size()) - 1; }
};

CoeffSchedule coefficient_schedule(const RegimeParams& params, const ChainPath& path);

// Affine special case (a2 = 0 on every regime of the path): c3 vanishes
// identically and the pair (c1, c2) obeys
//
//   c2_{n-1} = -a1 + mu c2_n
//   c1_{n-1} = -a0 + c1_n + c2_n kappa + sigma^2 c2_n^2 / 2
//
// which coincides with the general recursion at c3 = 0.
CoeffSchedule affine_schedule(const RegimeParams& params, const ChainPath& path);

}  // namespace rsqtsm
