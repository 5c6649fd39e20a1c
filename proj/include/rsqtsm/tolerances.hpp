#pragma once

// Single source of truth for the numeric tolerances used across the engine,
// the oracles and the test suites.
namespace rsqtsm::tol {

inline constexpr double kRowSum = 1e-12;          // row-stochasticity slack
inline constexpr double kDistSum = 1e-12;         // probability vector slack
inline constexpr double kPathProbSum = 1e-10;     // enumerated path probabilities vs 1
inline constexpr double kQuadAgreement = 1e-8;    // closed form vs nested quadrature, relative
inline constexpr double kGaussMoment = 1e-10;     // closed form vs adaptive integration, relative
inline constexpr double kExactAlgebra = 1e-12;    // cross-implementation identities
inline constexpr double kMcSigmas = 4.0;          // Monte Carlo acceptance band, standard errors
inline constexpr double kHighVariance = 0.05;     // SE/mean ratio flagged as heavy-tailed

}  // namespace rsqtsm::tol
