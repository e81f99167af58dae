#include "skewbm/excursion_law.hpp"

#include <algorithm>
#include <cmath>

#include "skewbm/detail/series_util.hpp"
#include "skewbm/kernels.hpp"

namespace skewbm {

using detail::StopRule;

double csaki_tail(int j, double y, double t) {
    if (j < 1) throw std::domain_error("csaki_tail: rank j must be >= 1");
    if (!(y >= 0.0)) throw std::domain_error("csaki_tail: level y must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("csaki_tail: time t must be > 0");
    return 2.0 * normal_sf((2.0 * j - 1.0) * y / std::sqrt(t));
}

SeriesResult ranked_height_tail(SkewParam alpha, const RankedHeightQuery& q,
                                const SeriesControl& ctrl) {
    q.validate();
    ctrl.validate();

    // Analytic limit: the series is the negative-binomial mass times 2*Phi_c(0) = 1.
    if (q.y == 0.0) return {1.0, 0, 0.0};

    const double a = alpha.value();
    const double r = 1.0 - 2.0 * a;
    // Structural reduction: (1-2a)^{h-j} annihilates everything but h = j.
    if (r == 0.0) return {csaki_tail(q.j, q.y, q.t), 1, 0.0};

    const double log_abs_r = std::log(std::abs(r));
    const double sign_r = r < 0.0 ? -1.0 : 1.0;
    const double log_rho = q.j * std::log(2.0 * a);
    const double scale = q.y / std::sqrt(q.t);

    // Weights are tracked in log space with the sign separate, so h can run to
    // max_terms without overflow even when binomials get astronomical.
    NeumaierSum sum;
    StopRule stop;
    double last_bound = 0.0;
    int terms = 0;
    bool converged = false;
    for (int h = q.j; h <= q.j + ctrl.max_terms - 1; ++h) {
        const double sf = normal_sf((2.0 * h - 1.0) * scale);
        const double logw =
            log_binomial(h - 1, q.j - 1) + (h - q.j) * log_abs_r + log_rho + std::log(2.0);
        const double mag = sf > 0.0 ? std::exp(logw + std::log(sf)) : 0.0;
        const double sgn = ((h - q.j) % 2 == 1) ? sign_r : 1.0;
        sum.add(sgn * mag);
        ++terms;
        last_bound = mag;
        if (stop.update(last_bound, ctrl.abs_tol)) {
            converged = true;
            break;
        }
    }

    // Past the stopping point the ratio of successive bounds is below
    // |r| * h/(h-j+1) * (Gaussian factor < 1); cap it by a safe q < 1.
    const int h_last = q.j + terms - 1;
    double ratio = std::abs(r) * double(h_last) / double(h_last - q.j + 1);
    ratio = std::min(ratio, 0.99);
    double tail = last_bound * ratio / (1.0 - ratio);
    if (r < 0.0) {
        const double cond = sum.condition_number();
        if (cond > 1e8) {
            throw ConvergenceError("ranked_height_tail: alternating sum lost all significant digits",
                                   sum.value(), tail * cond, terms);
        }
        tail *= cond;
    }
    if (!converged) {
        throw ConvergenceError("ranked_height_tail: term budget exhausted", sum.value(),
                               std::max(tail, last_bound), terms);
    }

    double value = sum.value();
    if (value < 0.0 && value >= -tail) value = 0.0;
    value = std::min(value, 1.0);
    return {value, terms, tail};
}

SeriesResult transfer_tail(SkewParam alpha, SkewParam beta, int j, double y, double t,
                           const SeriesControl& ctrl) {
    if (j < 1) throw std::domain_error("transfer_tail: rank j must be >= 1");
    if (!(y > 0.0)) throw std::domain_error("transfer_tail: requires y > 0 strictly");
    if (!(t > 0.0)) throw std::domain_error("transfer_tail: time t must be > 0");
    ctrl.validate();

    const double ratio = alpha.value() / beta.value();
    const double r = 1.0 - ratio;  // may exceed 1 in magnitude when alpha > beta
    const double log_rho = j * std::log(ratio);

    if (r == 0.0) {
        // alpha == beta: only h = j contributes with unit weight.
        SeriesResult inner = ranked_height_tail(beta, {j, y, t}, ctrl);
        return {inner.value, 1, inner.tail_bound};
    }

    const double log_abs_r = std::log(std::abs(r));
    const double sign_r = r < 0.0 ? -1.0 : 1.0;

    NeumaierSum sum;
    StopRule stop;
    double last_bound = 0.0;
    double inner_tail = 0.0;
    int terms = 0;
    bool converged = false;
    for (int h = j; h <= j + ctrl.max_terms - 1; ++h) {
        const double logw = log_binomial(h - 1, j - 1) + (h - j) * log_abs_r + log_rho;
        // For alpha > beta the weight grows geometrically; the beta-side tail
        // must be resolved to abs_tol / weight or its truncation error gets
        // amplified past the target accuracy.
        SeriesControl inner_ctrl = ctrl;
        inner_ctrl.abs_tol = std::max(1e-300, ctrl.abs_tol * std::exp(-std::max(0.0, logw)));
        const SeriesResult inner = ranked_height_tail(beta, {h, y, t}, inner_ctrl);
        const double mag = inner.value > 0.0 ? std::exp(logw + std::log(inner.value)) : 0.0;
        const double sgn = ((h - j) % 2 == 1) ? sign_r : 1.0;
        sum.add(sgn * mag);
        if (inner.tail_bound > 0.0)
            inner_tail += std::exp(logw + std::log(inner.tail_bound));
        ++terms;
        last_bound = mag;
        if (stop.update(last_bound, ctrl.abs_tol)) {
            converged = true;
            break;
        }
    }

    // The beta-side tails decay like exp(-2h^2y^2/t); past the stop point the
    // per-step Gaussian ratio exp(-4 h y^2 / t) is explicit and eventually
    // beats any geometric growth of the weights.
    const int h_last = j + terms - 1;
    const double gauss_ratio = std::exp(-4.0 * h_last * y * y / t);
    double step = std::abs(r) * (double(h_last) / double(h_last - j + 1)) * gauss_ratio;
    step = std::min(step, 0.99);
    double tail = last_bound * step / (1.0 - step) + inner_tail;
    if (r < 0.0) {
        const double cond = sum.condition_number();
        if (cond > 1e8) {
            throw ConvergenceError("transfer_tail: alternating sum lost all significant digits",
                                   sum.value(), tail * cond, terms);
        }
        tail *= cond;
    }
    if (!converged) {
        throw ConvergenceError("transfer_tail: term budget exhausted", sum.value(),
                               std::max(tail, last_bound), terms);
    }

    double value = sum.value();
    if (value < 0.0 && value >= -tail) value = 0.0;
    return {value, terms, tail};
}

std::vector<double> binomial_moment_invert(const std::vector<double>& b, int m_max) {
    if (m_max < 0) throw std::domain_error("binomial_moment_invert: m_max must be >= 0");
    if (static_cast<std::size_t>(m_max) >= b.size())
        throw std::domain_error("binomial_moment_invert: m_max must be < len(b)");

    const int K = static_cast<int>(b.size());
    std::vector<double> a(m_max + 1, 0.0);
    for (int m = 0; m <= m_max; ++m) {
        NeumaierSum sum;
        double binom = 1.0;  // C(k, m), advanced multiplicatively from k = m
        for (int k = m; k < K; ++k) {
            const double sgn = ((k - m) % 2 == 1) ? -1.0 : 1.0;
            sum.add(sgn * binom * b[k]);
            binom *= double(k + 1) / double(k + 1 - m);
        }
        a[m] = sum.value();
    }
    return a;
}

std::vector<double> binomial_moment_forward(const std::vector<double>& a, int k_max) {
    if (k_max < 0) throw std::domain_error("binomial_moment_forward: k_max must be >= 0");
    const int M = static_cast<int>(a.size());
    std::vector<double> b(k_max + 1, 0.0);
    for (int k = 0; k <= k_max; ++k) {
        NeumaierSum sum;
        double binom = 1.0;  // C(m, k) from m = k upward
        for (int m = k; m < M; ++m) {
            sum.add(binom * a[m]);
            binom *= double(m + 1) / double(m + 1 - k);
        }
        b[k] = sum.value();
    }
    return b;
}

}  // namespace skewbm
