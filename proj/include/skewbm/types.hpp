#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace skewbm {

// Skewness probability of the excursion-sign construction. Strictly inside
// (0,1); the endpoints break the Bernoulli sign law.
class SkewParam {
public:
    explicit SkewParam(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::domain_error("SkewParam: alpha must lie strictly in (0,1), got " +
                                    std::to_string(alpha));
        }
    }
    double value() const { return alpha_; }
    SkewParam mirrored() const { return SkewParam(1.0 - alpha_); }

private:
    double alpha_;
};

// Truncation policy shared by every infinite series in the library.
struct SeriesControl {
    double abs_tol = 1e-12;   // stop once the rigorous per-term bound falls below this
    int max_terms = 100000;   // hard budget before a ConvergenceError is raised

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::domain_error("SeriesControl: abs_tol must be > 0");
        if (max_terms < 1) throw std::domain_error("SeriesControl: max_terms must be >= 1");
    }
};

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    double tail_bound = 0.0;  // estimated truncation error, >= 0
};

// Raised when a series or quadrature exhausts its budget. Carries the best
// partial answer so callers can decide whether it is still usable.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial, double tail, long terms)
        : std::runtime_error(what), partial_value(partial), tail_bound(tail), terms_used(terms) {}

    double partial_value;
    double tail_bound;
    long terms_used;
};

// Neumaier-compensated accumulator. Also tracks the sum of absolute values so
// alternating-series condition numbers can be reported.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        abs_sum_ += std::abs(x);
    }
    double value() const { return sum_ + comp_; }
    double abs_sum() const { return abs_sum_; }
    // Sigma|terms| / |Sigma terms|; large values mean the digits are gone.
    double condition_number() const {
        double v = std::abs(value());
        if (v == 0.0) return abs_sum_ == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return abs_sum_ / v;
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_sum_ = 0.0;
};

// log C(n, k) via lgamma; sign-free, safe for n far beyond factorial overflow.
inline double log_binomial(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(name) + ": non-finite argument");
    }
}

}  // namespace skewbm
