#include "permix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace permix {

double RunningStat::stderr_mean() const {
    return n > 1 ? std::sqrt(variance() / double(n)) : 0.0;
}

BinomialCI wilson_ci(long long successes, long long trials, double z) {
    BinomialCI ci;
    if (trials <= 0) return ci;
    double n = double(trials);
    double phat = double(successes) / n;
    ci.hat = phat;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    ci.lo = std::max(0.0, center - half);
    ci.hi = std::min(1.0, center + half);
    return ci;
}

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 paired points");
    double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double vx = sxx - sx * sx / n;
    double cxy = sxy - sx * sy / n;
    double vy = syy - sy * sy / n;
    LinFit f;
    f.slope = vx > 0 ? cxy / vx : 0.0;
    f.intercept = (sy - f.slope * sx) / n;
    f.r2 = (vx > 0 && vy > 0) ? (cxy * cxy) / (vx * vy) : 1.0;
    return f;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of empty sample");
    q = std::min(1.0, std::max(0.0, q));
    size_t k = size_t(q * double(v.size() - 1) + 0.5);
    std::nth_element(v.begin(), v.begin() + k, v.end());
    return v[k];
}

double chi_square_stat(const std::vector<long long>& counts,
                       const std::vector<double>& expected) {
    if (counts.size() != expected.size())
        throw std::invalid_argument("chi_square_stat: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
        double d = double(counts[i]) - expected[i];
        s += d * d / expected[i];
    }
    return s;
}

double chi_square_critical(int df, double z) {
    // Wilson-Hilferty: chi2/df approx normal( 1 - 2/(9df), 2/(9df) ) cubed.
    double a = 2.0 / (9.0 * double(df));
    double c = 1.0 - a + z * std::sqrt(a);
    return double(df) * c * c * c;
}

double sign_test_z(long long positives, long long nonzero) {
    if (nonzero <= 0) return 0.0;
    double n = double(nonzero);
    return (double(positives) - n / 2.0) / std::sqrt(n / 4.0);
}

RatioCI bootstrap_ratio(const std::vector<double>& num,
                        const std::vector<double>& den,
                        int resamples, uint64_t seed, double level) {
    if (num.size() != den.size() || num.empty())
        throw std::invalid_argument("bootstrap_ratio: bad sample");
    size_t n = num.size();
    double sn = 0, sd = 0;
    for (size_t i = 0; i < n; ++i) {
        sn += num[i];
        sd += den[i];
    }
    RatioCI out;
    out.hat = sn / sd;
    Rng rng = make_rng(seed, 0xb007);
    std::vector<double> reps(resamples);
    for (int r = 0; r < resamples; ++r) {
        double bn = 0, bd = 0;
        for (size_t i = 0; i < n; ++i) {
            size_t j = size_t(rng() % n);
            bn += num[j];
            bd += den[j];
        }
        reps[r] = bd != 0 ? bn / bd : out.hat;
    }
    double tail = (1.0 - level) / 2.0;
    out.lo = quantile(reps, tail);
    out.hi = quantile(reps, 1.0 - tail);
    return out;
}

} // namespace permix
