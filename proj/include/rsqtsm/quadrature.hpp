#pragma once

#include <functional>
#include <vector>

namespace rsqtsm {

// Gauss-Hermite rule normalized for the standard normal weight:
//
//   sum_i w_i f(x_i)  ~  E[f(eps)],  eps ~ N(0,1),  sum_i w_i = 1.
//
// Nodes and weights come from the Golub-Welsch eigen-procedure on the Jacobi
// matrix of the orthonormal (probabilists') Hermite polynomials, so no
// tabulated constants are involved.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_hermite_rule(int n);

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b] with interval
// bisection driven by the embedded error estimate.
double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol);

}  // namespace rsqtsm
