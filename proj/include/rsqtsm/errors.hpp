#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rsqtsm {

// Base class for everything thrown by the engine.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transition matrix entry below zero. Indices are 0-based.
struct NegativeEntry : Error {
    NegativeEntry(int row_, int col_, int time_, double value_)
        : Error("negative transition entry q[" + std::to_string(row_) + "][" +
                std::to_string(col_) + "] = " + std::to_string(value_) +
                " at time " + std::to_string(time_)),
          row(row_), col(col_), time(time_), value(value_) {}
    int row, col, time;
    double value;
};

// Transition matrix row does not sum to one within tolerance.
struct RowSumViolation : Error {
    RowSumViolation(int row_, int time_, double sum_)
        : Error("row " + std::to_string(row_) + " of transition matrix at time " +
                std::to_string(time_) + " sums to " + std::to_string(sum_)),
          row(row_), time(time_), sum(sum_) {}
    int row, time;
    double sum;
};

// A time index fell outside the transition schedule or horizon.
struct TimeOutOfRange : Error {
    explicit TimeOutOfRange(int time_, const std::string& what_)
        : Error("time " + std::to_string(time_) + " out of range: " + what_), time(time_) {}
    int time;
};

// Exhaustive enumeration would exceed the path budget.
struct PathBudgetExceeded : Error {
    PathBudgetExceeded(unsigned long long required_, unsigned long long budget_)
        : Error("exact enumeration needs " + std::to_string(required_) +
                " paths, budget is " + std::to_string(budget_) +
                "; consider chain Monte Carlo mode"),
          required(required_), budget(budget_) {}
    unsigned long long required, budget;
};

// The Gaussian quadratic-exponential moment is infinite: 1 - 2 g <= 0.
struct DivergentExpectation : Error {
    DivergentExpectation(double g_, int time_, int regime_, std::vector<int> path_suffix_ = {})
        : Error(describe(g_, time_, regime_, path_suffix_)),
          g(g_), time(time_), regime(regime_), path_suffix(std::move(path_suffix_)) {}
    double g;
    int time;    // -1 when unknown at throw site
    int regime;  // -1 when unknown at throw site
    std::vector<int> path_suffix;  // regimes from `time` onward, when known

private:
    static std::string describe(double g_, int time_, int regime_,
                                const std::vector<int>& suffix) {
        std::string msg = "divergent expectation: quadratic exponent g = " +
                          std::to_string(g_) + " >= 1/2";
        if (time_ >= 0) msg += " at time " + std::to_string(time_);
        if (regime_ >= 0) msg += ", regime " + std::to_string(regime_);
        if (!suffix.empty()) {
            msg += ", path fragment (";
            for (std::size_t i = 0; i < suffix.size(); ++i) {
                if (i) msg += ",";
                msg += std::to_string(suffix[i]);
            }
            msg += ")";
        }
        return msg;
    }
};

// Affine specialization requested but some regime has a2 != 0.
struct NotAffine : Error {
    NotAffine(int regime_, double a2_)
        : Error("regime " + std::to_string(regime_) + " has a2 = " + std::to_string(a2_) +
                "; affine recursion requires a2 = 0"),
          regime(regime_), a2(a2_) {}
    int regime;
    double a2;
};

// Nested quadrature detected an integrand growing at least as fast as exp(x^2/2).
struct QuadratureDiverged : Error {
    QuadratureDiverged(int time_, double coeff_)
        : Error("quadrature diverged at time " + std::to_string(time_) +
                ": integrand quadratic coefficient " + std::to_string(coeff_) + " >= 1/2"),
          time(time_), coeff(coeff_) {}
    int time;
    double coeff;
};

// Config file could not be parsed.
struct ParseError : Error {
    ParseError(const std::string& origin, int line_, const std::string& detail)
        : Error(origin + (line_ > 0 ? ":" + std::to_string(line_) : "") + ": " + detail),
          line(line_) {}
    int line;
};

// Config parsed but failed semantic validation.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace rsqtsm
