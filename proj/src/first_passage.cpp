#include "skewbm/first_passage.hpp"

#include <algorithm>
#include <cmath>

#include "skewbm/detail/series_util.hpp"
#include "skewbm/excursion_law.hpp"
#include "skewbm/kernels.hpp"
#include "skewbm/quadrature.hpp"

namespace skewbm {

namespace {

using detail::StopRule;

struct ValueWithTail {
    double value;
    double tail;
};

// Closed-form CDF for x <= 0 < y:
//   P_x(T_y <= t) = sum_h 2a (1-2a)^{h-1} * 2(1 - Phi(((2h-1)y - x)/sqrt(t))).
// Derived from the strong Markov decomposition at T_0; reduces to the
// Corollary series at x = 0.
SeriesResult crossing_cdf_series(SkewParam alpha, double x, double y, double t,
                                 const SeriesControl& ctrl) {
    ctrl.validate();
    const double a = alpha.value();
    const double r = 1.0 - 2.0 * a;
    const double sqt = std::sqrt(t);

    if (r == 0.0) return {2.0 * normal_sf((y - x) / sqt), 1, 0.0};

    NeumaierSum sum;
    StopRule stop;
    double weight = 2.0 * a;
    double last_bound = 0.0;
    int h = 1;
    bool converged = false;
    for (; h <= ctrl.max_terms; ++h) {
        const double sf = normal_sf(((2.0 * h - 1.0) * y - x) / sqt);
        const double term = weight * 2.0 * sf;
        sum.add(term);
        last_bound = std::abs(term);
        if (stop.update(last_bound, ctrl.abs_tol)) {
            converged = true;
            break;
        }
        weight *= r;
    }

    const double q = std::abs(r);
    double tail = last_bound * q / (1.0 - q);
    if (r < 0.0) {
        const double cond = sum.condition_number();
        if (cond > 1e8) {
            throw ConvergenceError("fpt_cdf: alternating sum lost all significant digits",
                                   sum.value(), tail * cond, h);
        }
        tail *= cond;
    }
    if (!converged) {
        throw ConvergenceError("fpt_cdf: term budget exhausted", sum.value(),
                               std::max(tail, last_bound), h);
    }

    double value = sum.value();
    value = std::clamp(value, 0.0, 1.0);
    return {value, h, tail};
}

ValueWithTail density_with_tail(SkewParam alpha, double x, double y, double t,
                                const SeriesControl& ctrl, double quad_tol) {
    if (y == 0.0) return {bm_fpt_density(x, 0.0, t), 0.0};
    if (y < 0.0) return density_with_tail(alpha.mirrored(), -x, -y, t, ctrl, quad_tol);
    if (x <= 0.0) {
        const SeriesResult g = g_series(alpha, x, y, t, ctrl);
        return {g.value, g.tail_bound};
    }
    if (x > y) return {bm_fpt_density(x, y, t), 0.0};
    const SeriesResult h = theta_hitting_density(x, y, t, ctrl);
    const double corr = correction_term(alpha, x, y, t, ctrl, quad_tol);
    return {h.value + corr, h.tail_bound + quad_tol};
}

}  // namespace

void DensityCurve::check() const {
    if (t_grid.size() != values.size())
        throw std::logic_error("DensityCurve: grid/value length mismatch");
    const double tol = std::max(series_tol, quad_tol);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw std::logic_error("DensityCurve: time grid must be strictly ascending");
        if (values[i] < -tol) throw std::logic_error("DensityCurve: negative value beyond tolerance");
        if (kind == Kind::cdf) {
            if (values[i] > 1.0 + tol) throw std::logic_error("DensityCurve: CDF exceeds 1");
            if (i > 0 && values[i] < values[i - 1] - 2.0 * tol)
                throw std::logic_error("DensityCurve: CDF decreasing beyond tolerance");
        }
    }
}

SeriesResult fpt_density_from_origin(SkewParam alpha, double y, double t,
                                     const SeriesControl& ctrl) {
    if (y == 0.0) throw std::domain_error("fpt_density_from_origin: y must be nonzero");
    if (y < 0.0) return g_series(alpha.mirrored(), 0.0, -y, t, ctrl);
    return g_series(alpha, 0.0, y, t, ctrl);
}

SeriesResult fpt_cdf_from_origin(SkewParam alpha, double y, double t, const SeriesControl& ctrl) {
    if (y == 0.0) throw std::domain_error("fpt_cdf_from_origin: y must be nonzero");
    if (t < 0.0) throw std::domain_error("fpt_cdf_from_origin: t must be >= 0");
    if (t == 0.0) return {0.0, 0, 0.0};
    if (y < 0.0) return ranked_height_tail(alpha.mirrored(), {1, -y, t}, ctrl);
    return ranked_height_tail(alpha, {1, y, t}, ctrl);
}

double correction_term(SkewParam alpha, double x, double y, double t, const SeriesControl& ctrl,
                       double quad_tol) {
    if (!(y > 0.0 && x > 0.0 && x < y))
        throw std::domain_error("correction_term: requires 0 < x < y");
    if (!(t > 0.0)) throw std::domain_error("correction_term: t must be > 0");

    // theta_{y-x,y} is the hit-zero-first kernel from x (sine argument pi x n / y).
    const double mirror_x = y - x;
    auto integrand = [&](double s) {
        return theta_hitting_density(mirror_x, y, t - s, ctrl).value *
               g_series(alpha, 0.0, y, s, ctrl).value;
    };
    return integrate_adaptive(integrand, 0.0, t, quad_tol).value;
}

double fpt_density(const FirstPassageQuery& q, const SeriesControl& ctrl, double quad_tol) {
    q.validate();
    if (!(q.t > 0.0)) throw std::domain_error("fpt_density: t must be > 0");
    return density_with_tail(q.alpha, q.x, q.y, q.t, ctrl, quad_tol).value;
}

double fpt_cdf(const FirstPassageQuery& q, const SeriesControl& ctrl, double quad_tol) {
    q.validate();
    if (q.t == 0.0) return 0.0;
    if (q.y == 0.0) return bm_fpt_cdf(q.x, 0.0, q.t);
    if (q.y < 0.0) return fpt_cdf({q.alpha.mirrored(), -q.x, -q.y, q.t}, ctrl, quad_tol);
    if (q.x <= 0.0) return crossing_cdf_series(q.alpha, q.x, q.y, q.t, ctrl).value;
    if (q.x > q.y) return bm_fpt_cdf(q.x, q.y, q.t);

    auto density = [&](double s) {
        return density_with_tail(q.alpha, q.x, q.y, s, ctrl, quad_tol).value;
    };
    const QuadResult r = integrate_adaptive(density, 0.0, q.t, quad_tol);
    return std::clamp(r.value, 0.0, 1.0);
}

FptCurves fpt_curves(SkewParam alpha, double x, double y, const std::vector<double>& t_grid,
                     const SeriesControl& ctrl, double quad_tol) {
    if (t_grid.empty()) throw std::domain_error("fpt_curves: empty time grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw std::domain_error("fpt_curves: grid times must be > 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw std::domain_error("fpt_curves: grid must be strictly ascending");
    }
    FirstPassageQuery probe{alpha, x, y, t_grid.front()};
    probe.validate();

    FptCurves out;
    auto init = [&](DensityCurve& c, DensityCurve::Kind kind) {
        c.t_grid = t_grid;
        c.values.resize(t_grid.size());
        c.tail_bounds.resize(t_grid.size());
        c.kind = kind;
        c.alpha = alpha.value();
        c.x = x;
        c.y = y;
        c.series_tol = ctrl.abs_tol;
        c.quad_tol = quad_tol;
    };
    init(out.density, DensityCurve::Kind::density);
    init(out.cdf, DensityCurve::Kind::cdf);

    // Mirror once so the branch logic below only sees y > 0 or y == 0.
    SkewParam a = alpha;
    double xx = x, yy = y;
    if (y < 0.0) {
        a = alpha.mirrored();
        xx = -x;
        yy = -y;
    }

    const bool quadrature_branch = (yy > 0.0 && xx > 0.0 && xx < yy);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const ValueWithTail d = density_with_tail(a, xx, yy, t_grid[i], ctrl, quad_tol);
        out.density.values[i] = d.value;
        out.density.tail_bounds[i] = d.tail;
    }

    if (!quadrature_branch) {
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            if (yy == 0.0) {
                out.cdf.values[i] = bm_fpt_cdf(xx, 0.0, t_grid[i]);
                out.cdf.tail_bounds[i] = 0.0;
            } else if (xx <= 0.0) {
                const SeriesResult f = crossing_cdf_series(a, xx, yy, t_grid[i], ctrl);
                out.cdf.values[i] = f.value;
                out.cdf.tail_bounds[i] = f.tail_bound;
            } else {
                out.cdf.values[i] = bm_fpt_cdf(xx, yy, t_grid[i]);
                out.cdf.tail_bounds[i] = 0.0;
            }
        }
    } else {
        // Accumulate the density integral panel by panel along the grid.
        auto density = [&](double s) {
            return density_with_tail(a, xx, yy, s, ctrl, quad_tol).value;
        };
        NeumaierSum mass;
        double err = 0.0;
        double prev_t = 0.0;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const QuadResult r = integrate_adaptive(density, prev_t, t_grid[i], quad_tol);
            mass.add(r.value);
            err += r.error_estimate;
            out.cdf.values[i] = std::clamp(mass.value(), 0.0, 1.0);
            out.cdf.tail_bounds[i] = err;
            prev_t = t_grid[i];
        }
    }

    out.density.check();
    out.cdf.check();
    return out;
}

std::vector<double> log_time_grid(double t_min, double t_max, int points) {
    if (!(t_min > 0.0) || !(t_max > t_min)) throw std::domain_error("log_time_grid: bad range");
    if (points < 2) throw std::domain_error("log_time_grid: need at least 2 points");
    std::vector<double> grid(points);
    const double lo = std::log(t_min), hi = std::log(t_max);
    for (int i = 0; i < points; ++i)
        grid[i] = std::exp(lo + (hi - lo) * i / (points - 1));
    grid.front() = t_min;
    grid.back() = t_max;
    return grid;
}

}  // namespace skewbm
