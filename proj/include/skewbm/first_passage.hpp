#pragma once

#include <vector>

#include "skewbm/types.hpp"

namespace skewbm {

struct FirstPassageQuery {
    SkewParam alpha;
    double x;  // start position
    double y;  // target level
    double t;  // time; > 0 for densities, >= 0 for CDFs

    void validate() const {
        require_finite(x, "FirstPassageQuery.x");
        require_finite(y, "FirstPassageQuery.y");
        require_finite(t, "FirstPassageQuery.t");
        if (x == y) throw std::domain_error("FirstPassageQuery: x == y is degenerate");
        if (t < 0.0) throw std::domain_error("FirstPassageQuery: t must be >= 0");
    }
};

// A time grid with evaluated density or CDF values plus provenance metadata.
struct DensityCurve {
    enum class Kind { density, cdf };

    std::vector<double> t_grid;       // ascending
    std::vector<double> values;
    std::vector<double> tail_bounds;  // per-point series/quadrature error estimate
    Kind kind = Kind::density;
    double alpha = 0.5, x = 0.0, y = 0.0;
    double series_tol = 1e-12, quad_tol = 1e-9;

    // Enforces the documented invariants: ascending grid, values above
    // -series_tol, CDF values nondecreasing within 2*tol and <= 1 + tol.
    void check() const;
};

// First passage density of skew Brownian motion started at the origin:
// the geometric mixture 2a sum_h (1-2a)^{h-1} f(0,(2h-1)y,t) for y > 0 and
// its alpha -> 1-alpha mirror for y < 0.
SeriesResult fpt_density_from_origin(SkewParam alpha, double y, double t,
                                     const SeriesControl& ctrl = {});

// P0(T_y <= t), via the highest-excursion identity P0(T_y < t) = P0(M_1(t) > y);
// y < 0 maps through alpha -> 1-alpha. t = 0 returns 0.
SeriesResult fpt_cdf_from_origin(SkewParam alpha, double y, double t,
                                 const SeriesControl& ctrl = {});

// Crossed-zero contribution to the 0 < x < y density:
//   sum_n (2/pi n) sin(pi x n / y) (g_{0,y} * kappa_{n,y})(t)
// evaluated, after exchanging the n-sum with the time integral, as the single
// absolutely convergent convolution
//   integral_0^t theta_{y-x,y}(t-s) g_{0,y}(s) ds,
// where theta_{y-x,y} is the hit-zero-first kernel. Nonnegative; converges to
// g_{0,y}(t) as x -> 0+ and to 0 as t -> 0+.
double correction_term(SkewParam alpha, double x, double y, double t,
                       const SeriesControl& ctrl = {}, double quad_tol = 1e-9);

// Full piecewise first passage density. Case selection:
//   y > 0:  x <= 0 -> g-series;  0 < x < y -> theta + correction;  x > y -> Brownian.
//   y < 0:  mirror through (alpha, x, y) -> (1-alpha, -x, -y).
//   y = 0:  Brownian (T_0 under P_x is Brownian for every alpha).
double fpt_density(const FirstPassageQuery& q, const SeriesControl& ctrl = {},
                   double quad_tol = 1e-9);

// P_x(T_y <= t). Closed-form geometric mixture of Brownian hitting laws for
// x <= 0 < y (and mirrors), Brownian beyond the level, adaptive quadrature of
// fpt_density for 0 < x < y.
double fpt_cdf(const FirstPassageQuery& q, const SeriesControl& ctrl = {},
               double quad_tol = 1e-9);

// Density and CDF curves over an ascending time grid. The CDF on the
// quadrature branch is accumulated panel-by-panel along the grid so the cost
// is one integration pass rather than one per point.
struct FptCurves {
    DensityCurve density;
    DensityCurve cdf;
};
FptCurves fpt_curves(SkewParam alpha, double x, double y, const std::vector<double>& t_grid,
                     const SeriesControl& ctrl = {}, double quad_tol = 1e-9);

// Logarithmic time grid helper shared by the CLI and the validation suites.
std::vector<double> log_time_grid(double t_min, double t_max, int points);

}  // namespace skewbm
