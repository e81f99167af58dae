#pragma once

#include <functional>

#include "skewbm/types.hpp"

namespace skewbm {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Adaptive integration of f over [a, b] to absolute tolerance abs_tol.
// Nested Gauss(7)/Kronrod(15) pair per panel, error from their difference,
// worst-error panel bisected first. Endpoints are never evaluated, so
// integrable endpoint singularities are fine. Deterministic for fixed inputs.
// Throws ConvergenceError (best estimate attached) if max_evals is exhausted.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-9, long max_evals = 200000);

// Integral of f over (0, upper) via the substitution t = u/(1-u), mapping the
// (possibly unbounded) time axis onto (0,1). upper = +infinity is allowed and
// is the documented route for the semi-infinite mass checks.
QuadResult integrate_time_transformed(const std::function<double(double)>& f, double upper,
                                      double abs_tol = 1e-9, long max_evals = 200000);

}  // namespace skewbm
