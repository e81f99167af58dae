#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "skewbm/types.hpp"

namespace skewbm::mc {

enum class Sampler { ExcursionFlip, SkewWalk };

// Monte Carlo run description. step is the spatial step delta for SkewWalk
// (time advances by delta^2 per move) and the time step dt for ExcursionFlip.
struct McConfig {
    Sampler sampler = Sampler::SkewWalk;
    double step = 0.02;
    double horizon = 50.0;
    int n_paths = 10000;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(step > 0.0)) throw std::domain_error("McConfig: step must be > 0");
        if (!(horizon > 0.0)) throw std::domain_error("McConfig: horizon must be > 0");
        if (n_paths < 1) throw std::domain_error("McConfig: n_paths must be >= 1");
    }
};

struct PathSample {
    std::vector<double> times;
    std::vector<double> positions;
    double start = 0.0;
};

struct Excursion {
    std::size_t begin;  // first index of the run
    std::size_t end;    // one past the last index
    int sign;           // +1 / -1
    double height;      // run maximum for positive runs, 0 for negative ones
};

struct ExcursionDecomposition {
    std::vector<Excursion> excursions;
    bool final_incomplete = true;
};

struct EmpiricalDistribution {
    std::vector<double> samples;  // sorted ascending, all <= horizon
    long n_censored = 0;          // paths that never reached the target
    double horizon = std::numeric_limits<double>::infinity();
};

// Per-path random stream: mt19937_64 seeded by a SplitMix64 mix of
// (master seed, path index), so every path's draws are a pure function of
// that pair regardless of scheduling. Normal variates use the Marsaglia
// polar transform to keep the sequence pinned by this code alone.
class PathRng {
public:
    PathRng(std::uint64_t master_seed, std::uint64_t path_index);

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();               // [0, 1)
    double normal();                  // standard normal
    bool bernoulli(double p);         // one u64 per draw
    int fair_sign();                  // +/-1 from buffered bits, 64 per u64

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

// Brownian path on the grid {0, dt, 2dt, ...} covering [0, horizon], from 0.
PathSample sample_bm_path(double dt, double horizon, PathRng& rng);

// Excursion-flipping construction: each maximal constant-sign run of the
// input gets an independent Bernoulli(alpha) sign; output = sign * |input|.
PathSample flip_excursions(const PathSample& path, SkewParam alpha, PathRng& rng);

// Same, with the per-excursion sign source injected (for the stubbed tests).
PathSample flip_excursions_with(const PathSample& path, const std::function<int()>& next_sign);

// Coupled two-step construction: the beta path flips each excursion positive
// with probability beta; the alpha path keeps a beta-positive excursion
// positive with probability alpha/beta. Requires alpha < beta. Returns
// (alpha path, beta path) sharing excursion intervals.
std::pair<PathSample, PathSample> coupled_flip(const PathSample& path, SkewParam alpha,
                                               SkewParam beta, PathRng& rng);

// Skew random walk: from a lattice-aligned start, step +/-delta with
// probability 1/2 away from the origin and +delta with probability alpha at
// the origin; time advances by delta^2 per step.
PathSample sample_skew_walk(SkewParam alpha, double start, double delta, double horizon,
                            PathRng& rng);

// Maximal constant-sign runs of the path (indices >= 1; index 0 is the
// start). Zero values attach to the preceding run.
ExcursionDecomposition decompose_excursions(const PathSample& path);

// The j_max largest excursion heights over [0, t], descending; negative
// excursions contribute 0 and the final incomplete excursion is included.
// Requires the path to start at 0.
std::vector<double> ranked_heights(const PathSample& path, double t, int j_max);

// First passage times to y from x under the configured sampler. Paths that
// do not reach y within the horizon are counted as censored. Crossing times
// are interpolated linearly between the bracketing grid points.
EmpiricalDistribution first_passage_sample(const McConfig& cfg, SkewParam alpha, double x,
                                           double y);

// One-sample Kolmogorov-Smirnov distance. When the sample is censored at a
// finite horizon, both the empirical and the analytic CDF are conditioned on
// {T <= horizon} (restricted KS).
double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf);

// Two-sample KS on the horizon-conditioned empirical CDFs.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// Upper tail probability of the chi-square distribution (regularized gamma).
double chi_square_pvalue(double statistic, int dof);

// Deterministic helper: runs fn(i) for i in [0, n) on up to the configured
// number of threads (SKEWBM_THREADS env var, default hardware concurrency).
// fn must only write to per-index state.
void parallel_for(long n, const std::function<void(long)>& fn);

}  // namespace skewbm::mc
