#include "rsqtsm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rsqtsm {

namespace {

// Implicit-shift QL iteration on a symmetric tridiagonal matrix (EISPACK tql2
// specialized for Gauss rules): eigenvalues land in d; row0 carries the first
// row of the accumulated eigenvector matrix through the Givens rotations,
// which is all the weights need.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& row0) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.push_back(0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 80) throw std::runtime_error("tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double fi = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(fi, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = fi / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    fi = row0[i + 1];
                    row0[i + 1] = s * row0[i] + c * fi;
                    row0[i] = c * row0[i] - s * fi;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// 15-point Kronrod extension of 7-point Gauss-Legendre on [-1, 1]
// (QUADPACK dqk15 abscissae and weights).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b, integral, error;
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        result_kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
    }
    return {a, b, result_kronrod * half, std::fabs((result_kronrod - result_gauss) * half)};
}

}  // namespace

QuadratureRule gauss_hermite_rule(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j < n; ++j) e.push_back(std::sqrt(static_cast<double>(j)));
    std::vector<double> row0(static_cast<std::size_t>(n), 0.0);
    row0[0] = 1.0;
    tridiagonal_ql(d, e, row0);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(n));
    rule.weights.reserve(static_cast<std::size_t>(n));
    for (int idx : order) {
        rule.nodes.push_back(d[static_cast<std::size_t>(idx)]);
        rule.weights.push_back(row0[static_cast<std::size_t>(idx)] *
                               row0[static_cast<std::size_t>(idx)]);
    }
    return rule;
}

double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol) {
    constexpr int kMaxSegments = 4096;
    std::vector<Segment> segments;
    segments.push_back(gauss_kronrod_15(f, a, b));
    double total = segments[0].integral;
    double err = segments[0].error;
    while (err > std::max(abs_tol, rel_tol * std::fabs(total)) &&
           static_cast<int>(segments.size()) < kMaxSegments) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segments.size(); ++i)
            if (segments[i].error > segments[worst].error) worst = i;
        const Segment s = segments[worst];
        const double mid = 0.5 * (s.a + s.b);
        segments[worst] = gauss_kronrod_15(f, s.a, mid);
        segments.push_back(gauss_kronrod_15(f, mid, s.b));
        total = 0.0;
        err = 0.0;
        for (const auto& seg : segments) {
            total += seg.integral;
            err += seg.error;
        }
    }
    // deterministic left-to-right accumulation
    std::sort(segments.begin(), segments.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    total = 0.0;
    for (const auto& s : segments) total += s.integral;
    return total;
}

}  // namespace rsqtsm
