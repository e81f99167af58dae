#pragma once

#include <limits>

namespace skewbm::detail {

// Truncation policy: stop once the rigorous per-term bound is below abs_tol
// AND has been decreasing for three consecutive terms, which guards against
// the non-monotone onset of the Gaussian factors. Terms that underflow to
// zero count as decreasing.
struct StopRule {
    double prev_bound = std::numeric_limits<double>::infinity();
    int consecutive_down = 0;

    bool update(double bound, double abs_tol) {
        if (bound < prev_bound || bound == 0.0)
            ++consecutive_down;
        else
            consecutive_down = 0;
        prev_bound = bound;
        return bound < abs_tol && consecutive_down >= 3;
    }
};

}  // namespace skewbm::detail
