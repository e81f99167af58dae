#pragma once

#include "skewbm/types.hpp"

namespace skewbm {

// Standard normal distribution function Phi(z). Relative error a few ulp
// across the real line; tails are underflow-safe down to ~1e-308.
double normal_cdf(double z);

// Survival function 1 - Phi(z), computed without cancellation.
double normal_sf(double z);

// First passage time density of standard Brownian motion from x to y:
//   f(x,y,t) = |y-x| / (sqrt(2 pi) t^{3/2}) * exp(-(y-x)^2 / 2t).
// Requires t > 0 and x != y (the degenerate hitting time has no density).
double bm_fpt_density(double x, double y, double t);

// P_x(T_y <= t) = 2(1 - Phi(|y-x|/sqrt(t))) for Brownian motion; t >= 0.
double bm_fpt_cdf(double x, double y, double t);

// Geometric mixture of Brownian first passage densities,
//   g(t) = 2a * sum_{j>=1} (1-2a)^{j-1} f(x, (2j-1)y, t),   x < y, y > 0.
// Truncated once the rigorous per-term bound drops below ctrl.abs_tol and has
// been decreasing for three consecutive terms; compensated summation keeps
// the alternating case (a > 1/2) honest, and the returned tail_bound is
// inflated by the observed condition number.
SeriesResult g_series(SkewParam alpha, double x, double y, double t,
                      const SeriesControl& ctrl = {});

// Density of {Brownian motion from x in (0,y) reaches y at time t before 0}:
//   h(t) = (pi/y^2) sum_{n>=1} n exp(-pi^2 n^2 t / 2y^2) sin(pi (y-x) n / y).
// Total mass over (0,inf) is x/y. Dispatches to the spectral series for
// t > 0.3 y^2 and to the method-of-images dual below that crossover; the two
// representations are cross-validated in the test suite.
SeriesResult theta_hitting_density(double x, double y, double t,
                                   const SeriesControl& ctrl = {});

// The two representations, exposed for cross-validation.
SeriesResult theta_hitting_density_spectral(double x, double y, double t,
                                            const SeriesControl& ctrl = {});
SeriesResult theta_hitting_density_image(double x, double y, double t,
                                         const SeriesControl& ctrl = {});

// Exponential density with rate lambda(n,y) = pi^2 n^2 / (2 y^2), at time t.
double exp_kernel_density(int n, double y, double t);

}  // namespace skewbm
