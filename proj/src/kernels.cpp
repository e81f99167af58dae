#include "skewbm/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "skewbm/detail/series_util.hpp"

namespace skewbm {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

using detail::StopRule;

}  // namespace

double normal_cdf(double z) {
    require_finite(z, "normal_cdf");
    return 0.5 * std::erfc(-z / kSqrt2);
}

double normal_sf(double z) {
    require_finite(z, "normal_sf");
    return 0.5 * std::erfc(z / kSqrt2);
}

double bm_fpt_density(double x, double y, double t) {
    require_finite(x, "bm_fpt_density");
    require_finite(y, "bm_fpt_density");
    require_finite(t, "bm_fpt_density");
    if (!(t > 0.0)) throw std::domain_error("bm_fpt_density: t must be > 0");
    if (x == y) throw std::domain_error("bm_fpt_density: x == y is a degenerate hitting time");
    const double d = std::abs(y - x);
    return d / (kSqrt2Pi * t * std::sqrt(t)) * std::exp(-d * d / (2.0 * t));
}

double bm_fpt_cdf(double x, double y, double t) {
    require_finite(x, "bm_fpt_cdf");
    require_finite(y, "bm_fpt_cdf");
    require_finite(t, "bm_fpt_cdf");
    if (t < 0.0) throw std::domain_error("bm_fpt_cdf: t must be >= 0");
    if (x == y) throw std::domain_error("bm_fpt_cdf: x == y is a degenerate hitting time");
    if (t == 0.0) return 0.0;
    return 2.0 * normal_sf(std::abs(y - x) / std::sqrt(t));
}

SeriesResult g_series(SkewParam alpha, double x, double y, double t, const SeriesControl& ctrl) {
    ctrl.validate();
    if (!(y > 0.0) || !(x < y)) throw std::domain_error("g_series: requires x < y and y > 0");
    if (!(t > 0.0)) throw std::domain_error("g_series: t must be > 0");

    const double a = alpha.value();
    const double r = 1.0 - 2.0 * a;  // signed geometric ratio, |r| < 1

    // alpha = 1/2 kills every term past j = 1; the identity is exact.
    if (r == 0.0) return {bm_fpt_density(x, y, t), 1, 0.0};

    NeumaierSum sum;
    StopRule stop;
    double weight = 2.0 * a;  // 2a * r^{j-1}, signed
    double last_bound = 0.0;
    int j = 1;
    for (; j <= ctrl.max_terms; ++j) {
        const double f = bm_fpt_density(x, (2.0 * j - 1.0) * y, t);
        const double term = weight * f;
        sum.add(term);
        last_bound = std::abs(weight) * f;
        if (stop.update(last_bound, ctrl.abs_tol)) break;
        weight *= r;
    }

    const double q = std::abs(r);
    double tail = last_bound * q / (1.0 - q);
    if (r < 0.0) {
        // Alternating: report the loss of significance, and refuse digit-free sums.
        const double cond = sum.condition_number();
        if (cond > 1e8) {
            throw ConvergenceError("g_series: alternating sum lost all significant digits",
                                   sum.value(), tail * cond, j);
        }
        tail *= cond;
    }
    if (j > ctrl.max_terms) {
        throw ConvergenceError("g_series: term budget exhausted before the bound fell below abs_tol",
                               sum.value(), std::max(tail, last_bound), ctrl.max_terms);
    }

    double value = sum.value();
    if (value < 0.0 && value >= -tail) value = 0.0;
    return {value, j, tail};
}

SeriesResult theta_hitting_density_spectral(double x, double y, double t, const SeriesControl& ctrl) {
    ctrl.validate();
    if (!(x > 0.0 && x < y)) throw std::domain_error("theta_hitting_density: requires 0 < x < y");
    if (!(t > 0.0)) throw std::domain_error("theta_hitting_density: t must be > 0");

    const double c = M_PI * M_PI * t / (2.0 * y * y);  // exponent scale: term_n ~ n e^{-c n^2}
    const double pref = M_PI / (y * y);
    const double theta = M_PI * (y - x) / y;

    NeumaierSum sum;
    int n = 1;
    double tail = std::numeric_limits<double>::infinity();
    for (; n <= ctrl.max_terms; ++n) {
        sum.add(pref * n * std::exp(-c * n * n) * std::sin(theta * n));
        // Rigorous tail: for m > n, m^2 >= n m, so sum_{m>n} m e^{-c m^2}
        // <= sum_{m>n} m rho^m with rho = e^{-c n}.
        const double rho = std::exp(-c * n);
        const double m0 = n + 1.0;
        tail = pref * std::pow(rho, m0) * (m0 - (m0 - 1.0) * rho) / ((1.0 - rho) * (1.0 - rho));
        if (tail < ctrl.abs_tol) break;
    }
    if (n > ctrl.max_terms) {
        throw ConvergenceError("theta_hitting_density: spectral tail bound never met the budget",
                               sum.value(), tail, ctrl.max_terms);
    }

    double value = sum.value();
    if (value < 0.0 && value >= -tail) value = 0.0;  // clamp only within the tail bound
    return {value, n, tail};
}

SeriesResult theta_hitting_density_image(double x, double y, double t, const SeriesControl& ctrl) {
    ctrl.validate();
    if (!(x > 0.0 && x < y)) throw std::domain_error("theta_hitting_density: requires 0 < x < y");
    if (!(t > 0.0)) throw std::domain_error("theta_hitting_density: t must be > 0");

    // h(t) = (2 pi t^3)^{-1/2} sum_{k in Z} d_k exp(-d_k^2 / 2t), d_k = (2k+1)y - x.
    // Pair k and -(k+1); |d| grows by 2y per pair, so terms die as exp(-2k^2y^2/t).
    const double pref = 1.0 / (kSqrt2Pi * t * std::sqrt(t));
    NeumaierSum sum;
    int pairs = 0;
    double tail = std::numeric_limits<double>::infinity();
    for (; pairs <= ctrl.max_terms; ++pairs) {
        const double dp = (2.0 * pairs + 1.0) * y - x;       // k = pairs
        const double dm = -(2.0 * pairs + 1.0) * y - x;      // k = -(pairs+1)
        const double tp = dp * std::exp(-dp * dp / (2.0 * t));
        const double tm = dm * std::exp(-dm * dm / (2.0 * t));
        sum.add(pref * tp);
        sum.add(pref * tm);
        // Remaining pairs q >= p+1 have |d| = dn + 2ky, magnitudes bounded by
        // 2(dn + 2ky + 2y) e^{-dn^2/2t} rho^k with rho = e^{-2 y dn / t};
        // sum the arithmetico-geometric series in closed form.
        const double dn = dp + 2.0 * y;
        const double rho = std::exp(-2.0 * y * dn / t);
        const double head = std::exp(-dn * dn / (2.0 * t));
        tail = 2.0 * pref * head *
               ((dn + 2.0 * y) / (1.0 - rho) + 2.0 * y * rho / ((1.0 - rho) * (1.0 - rho)));
        if (tail < ctrl.abs_tol) break;
    }
    if (pairs > ctrl.max_terms) {
        throw ConvergenceError("theta_hitting_density: image tail bound never met the budget",
                               sum.value(), tail, ctrl.max_terms);
    }

    double value = sum.value();
    if (value < 0.0 && value >= -tail) value = 0.0;
    return {value, 2 * (pairs + 1), tail};
}

SeriesResult theta_hitting_density(double x, double y, double t, const SeriesControl& ctrl) {
    // Spectral converges in O(1) terms for t >~ y^2; the image sum takes over
    // below the crossover, where the spectral partial sums cancel catastrophically.
    if (t < 0.3 * y * y) return theta_hitting_density_image(x, y, t, ctrl);
    return theta_hitting_density_spectral(x, y, t, ctrl);
}

double exp_kernel_density(int n, double y, double t) {
    if (n < 1) throw std::domain_error("exp_kernel_density: n must be >= 1");
    if (y == 0.0) throw std::domain_error("exp_kernel_density: y must be nonzero");
    if (t < 0.0) throw std::domain_error("exp_kernel_density: t must be >= 0");
    const double lambda = M_PI * M_PI * double(n) * double(n) / (2.0 * y * y);
    return lambda * std::exp(-lambda * t);
}

}  // namespace skewbm
