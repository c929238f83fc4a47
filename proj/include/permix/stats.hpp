#pragma once
// Ensemble statistics: running moments, binomial confidence bands, least
// squares, quantiles, bootstrap. Everything used by the acceptance gates
// lives here so the tolerances are applied uniformly.

#include <cstdint>
#include <vector>

#include "permix/rng.hpp"

namespace permix {

// ---------------------- running moments ----------------------
struct RunningStat {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0; // sum of squared deviations

    void push(double x) {
        ++n;
        double d = x - mean;
        mean += d / double(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
    double stderr_mean() const;
};

// ---------------------- binomial bands ----------------------
struct BinomialCI {
    double hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval at z standard deviations (z=3 is the suite default).
BinomialCI wilson_ci(long long successes, long long trials, double z = 3.0);

// ---------------------- regression ----------------------
struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------- order statistics ----------------------
// q in [0,1]; takes a copy, nth_element inside.
double quantile(std::vector<double> v, double q);

// ---------------------- chi-square ----------------------
// Pearson statistic against expected counts (same length, expected > 0).
double chi_square_stat(const std::vector<long long>& counts,
                       const std::vector<double>& expected);
// Wilson-Hilferty upper critical value for df degrees of freedom at z sigmas.
double chi_square_critical(int df, double z = 3.0);

// ---------------------- sign test ----------------------
// Two-sided z-statistic for #positives among n nonzero signs vs fair coin.
double sign_test_z(long long positives, long long nonzero);

// ---------------------- bootstrap ----------------------
// Percentile bootstrap CI for a ratio of sums: sum(num)/sum(den).
struct RatioCI {
    double hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
RatioCI bootstrap_ratio(const std::vector<double>& num,
                        const std::vector<double>& den,
                        int resamples, uint64_t seed, double level = 0.99);

} // namespace permix
