#pragma once

#include <vector>

#include "skewbm/types.hpp"

namespace skewbm {

// Query for P0(M_j(t) > y): rank j >= 1, level y >= 0, horizon t > 0.
struct RankedHeightQuery {
    int j;
    double y;
    double t;

    void validate() const {
        if (j < 1) throw std::domain_error("RankedHeightQuery: rank j must be >= 1");
        if (!(y >= 0.0)) throw std::domain_error("RankedHeightQuery: level y must be >= 0");
        if (!(t > 0.0)) throw std::domain_error("RankedHeightQuery: time t must be > 0");
    }
};

// Tail of the j-th ranked excursion height of skew Brownian motion,
//   P0(M_j(t) > y) = sum_h 2 C(h-1,j-1) (1-2a)^{h-j} (2a)^j (1 - Phi((2h-1)y/sqrt(t))).
// y = 0 returns exactly 1 (negative-binomial normalization); a = 1/2 reduces
// structurally to csaki_tail.
SeriesResult ranked_height_tail(SkewParam alpha, const RankedHeightQuery& q,
                                const SeriesControl& ctrl = {});

// Symmetric special case: P0(M_j(t) > y) = 2(1 - Phi((2j-1) y / sqrt(t))).
double csaki_tail(int j, double y, double t);

// Rank-transfer identity between skew parameters,
//   P0(M_j^{(a)}(t) > y) = sum_h C(h-1,j-1) (1-a/b)^{h-j} (a/b)^j P0(M_h^{(b)}(t) > y),
// with the b-side tails supplied by ranked_height_tail. Requires y > 0: for
// a > b the weights grow geometrically and only the Gaussian decay of the
// b-tails saves the sum, which vanishes at y = 0.
SeriesResult transfer_tail(SkewParam alpha, SkewParam beta, int j, double y, double t,
                           const SeriesControl& ctrl = {});

// Lemma-style binomial moment inversion: given b_k = sum_m C(m,k) a_m,
// recovers a_m = sum_k (-1)^{k-m} C(k,m) b_k, truncated at b's length,
// for m = 0..m_max. Compensated summation; truncation error is the caller's
// concern (the inversion is exact on finitely supported sequences).
std::vector<double> binomial_moment_invert(const std::vector<double>& b, int m_max);

// Forward map b_k = sum_m C(m,k) a_m, truncated at a's length, k = 0..k_max.
std::vector<double> binomial_moment_forward(const std::vector<double>& a, int k_max);

}  // namespace skewbm
