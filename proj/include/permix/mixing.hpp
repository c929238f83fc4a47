#pragma once
// Exact distribution evolution: TV distances, stationary distribution by
// lazified power iteration, mixing profiles, cutoff-window scans over an
// n-grid, and the stationary-measure flatness split.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "permix/matrix.hpp"
#include "permix/model.hpp"

namespace permix {

struct NotIrreducible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IterationBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu);

// Power iteration on (I+K)/2 until ||mu K - mu||_1 <= tol. Throws
// NotIrreducible when the recurrent part has more than one closed class,
// IterationBudget past max_iter.
std::vector<double> stationary_distribution(const StochasticMatrix& K,
                                            double tol = 1e-13,
                                            long long max_iter = 2000000);

// ---------------------- mixing profile ----------------------
struct MixingProfile {
    int start = 0;
    std::vector<double> tv_curve;      // tv_curve[t] = TV(K^t(x,.), pi)
    std::map<double, long long> tmix;  // eps -> first t with TV < eps, -1 if capped
    bool capped = false;
};

// Full curve out to the largest needed t (or t_max); tmix read off the curve.
MixingProfile mixing_profile(const StochasticMatrix& K, const std::vector<double>& pi,
                             int start, const std::vector<double>& eps_list,
                             long long t_max);

// Curve-free t_mix by doubling then bisection on the non-increasing TV curve
// (snapshots of the evolved distribution are kept at probe points).
long long find_tmix(const StochasticMatrix& K, const std::vector<double>& pi, int start,
                    double eps, long long t_max);

// ---------------------- cutoff scan ----------------------
struct CutoffPoint {
    int n = 0;
    double mean_tmix_lo = 0.0;   // t_mix(x, eps)
    double mean_tmix_hi = 0.0;   // t_mix(x, 1-eps)
    double mean_window = 0.0;    // difference
    double window_ratio = 0.0;   // window / t_mix(x, eps)
    double window_per_sqrtlog = 0.0;
    int skipped_envs = 0; // reducible or non-converged draws
    int used_envs = 0;
};
struct CutoffScanResult {
    double eps = 0.0;
    std::vector<CutoffPoint> points;
    double h_hat = 0.0;      // from least squares t_mix ~ log n / h (+ intercept)
    double fit_intercept = 0.0;
    double fit_r2 = 0.0;
};

// Demo-family scan on the mixture chain. starts_per_env uniformly random
// typical starts; each (n, seed) pair gets its own derived stream.
CutoffScanResult cutoff_scan(const std::vector<int>& n_grid, double eps,
                             int seeds_per_n, int starts_per_env, uint64_t seed,
                             int workers = 0);

// ---------------------- flatness split ----------------------
struct FlatnessSplit {
    double threshold = 0.0;  // (log n)^b / n
    double l2_small_sq = 0.0; // ||pi_1||_2^2 over entries <= threshold
    double mass_large = 0.0;  // total mass of entries > threshold
    long long count_large = 0;
};
FlatnessSplit l2_flatness(const std::vector<double>& pi, double b, int n);

} // namespace permix
