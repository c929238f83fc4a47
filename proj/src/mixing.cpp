#include "permix/mixing.hpp"

#include <algorithm>
#include <cmath>

#include "permix/kernels.hpp"
#include "permix/parallel.hpp"
#include "permix/stats.hpp"

namespace permix {

double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("tv_distance: dim mismatch");
    double s = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) s += std::abs(mu[i] - nu[i]);
    return 0.5 * s;
}

std::vector<double> stationary_distribution(const StochasticMatrix& K, double tol,
                                            long long max_iter) {
    SccResult scc = strongly_connected_components(K);
    int recurrent = 0;
    for (char r : scc.is_recurrent) recurrent += r;
    if (recurrent != 1)
        throw NotIrreducible("kernel has " + std::to_string(recurrent) +
                             " closed classes");

    std::vector<double> mu(K.n, 1.0 / double(K.n)), next;
    for (long long it = 0; it < max_iter; ++it) {
        left_multiply(K, mu, next);
        // residual of the *unlazified* balance
        double res = 0.0;
        for (int i = 0; i < K.n; ++i) res += std::abs(next[i] - mu[i]);
        // lazified update kills periodicity: mu <- (mu + mu K)/2
        for (int i = 0; i < K.n; ++i) mu[i] = 0.5 * (mu[i] + next[i]);
        if (res <= tol) {
            // renormalize away accumulated roundoff
            double s = 0.0;
            for (double v : mu) s += v;
            for (double& v : mu) v /= s;
            return mu;
        }
    }
    throw IterationBudget("stationary_distribution: no convergence within budget");
}

MixingProfile mixing_profile(const StochasticMatrix& K, const std::vector<double>& pi,
                             int start, const std::vector<double>& eps_list,
                             long long t_max) {
    MixingProfile prof;
    prof.start = start;
    std::vector<double> mu(K.n, 0.0), next;
    mu[start] = 1.0;
    double min_eps = 1.0;
    for (double e : eps_list) {
        prof.tmix[e] = -1;
        min_eps = std::min(min_eps, e);
    }
    for (long long t = 0;; ++t) {
        double d = tv_distance(mu, pi);
        prof.tv_curve.push_back(d);
        for (double e : eps_list)
            if (prof.tmix[e] < 0 && d < e) prof.tmix[e] = t;
        if (d < min_eps) break;
        if (t >= t_max) {
            prof.capped = true;
            break;
        }
        left_multiply(K, mu, next);
        mu.swap(next);
    }
    return prof;
}

long long find_tmix(const StochasticMatrix& K, const std::vector<double>& pi, int start,
                    double eps, long long t_max) {
    std::vector<double> mu(K.n, 0.0), next;
    mu[start] = 1.0;
    if (tv_distance(mu, pi) < eps) return 0;
    // doubling phase: probe TV at t = 1, 2, 4, ... keeping the last snapshot
    // above threshold
    std::vector<double> snap = mu; // distribution at t_lo
    long long t_lo = 0, t = 0, probe = 1;
    for (;;) {
        long long target = std::min(t_lo + probe, t_max);
        while (t < target) {
            left_multiply(K, mu, next);
            mu.swap(next);
            ++t;
        }
        double d = tv_distance(mu, pi);
        if (d < eps) break;
        snap = mu;
        t_lo = t;
        if (t >= t_max) return -1; // capped
        probe *= 2;
    }
    long long t_hi = t; // TV(t_hi) < eps <= TV(t_lo)
    // bisection phase: re-evolve from the snapshot
    while (t_hi - t_lo > 1) {
        long long mid = t_lo + (t_hi - t_lo) / 2;
        std::vector<double> cur = snap;
        for (long long s = t_lo; s < mid; ++s) {
            left_multiply(K, cur, next);
            cur.swap(next);
        }
        if (tv_distance(cur, pi) < eps) {
            t_hi = mid;
        } else {
            snap.swap(cur);
            t_lo = mid;
        }
    }
    return t_hi;
}

CutoffScanResult cutoff_scan(const std::vector<int>& n_grid, double eps,
                             int seeds_per_n, int starts_per_env, uint64_t seed,
                             int workers) {
    CutoffScanResult res;
    res.eps = eps;
    struct EnvOut {
        double sum_lo = 0.0, sum_hi = 0.0;
        int count = 0;
        bool skipped = false;
    };
    for (size_t gi = 0; gi < n_grid.size(); ++gi) {
        int n = n_grid[gi];
        MixtureSpec spec = make_demo_spec(n);
        std::vector<EnvOut> outs(seeds_per_n);
        parallel_for(seeds_per_n, workers, [&](long long si) {
            uint64_t env_seed = derive_seed(seed, (uint64_t(gi) << 32) | uint64_t(si));
            Environment env = sample_environment(spec, env_seed);
            StochasticMatrix bar = mixture_kernel(spec, env);
            std::vector<double> pi;
            try {
                pi = stationary_distribution(bar);
            } catch (const NotIrreducible&) {
                outs[si].skipped = true;
                return;
            } catch (const IterationBudget&) {
                outs[si].skipped = true;
                return;
            }
            Rng rng = make_rng(env_seed, 0x57a7);
            long long cap = 200 + 400 * (long long)std::log(double(n));
            for (int s = 0; s < starts_per_env; ++s) {
                int x = int(rng() % uint64_t(n));
                long long lo = find_tmix(bar, pi, x, eps, cap);
                long long hi = find_tmix(bar, pi, x, 1.0 - eps, cap);
                if (lo < 0 || hi < 0) continue;
                outs[si].sum_lo += double(lo);
                outs[si].sum_hi += double(hi);
                ++outs[si].count;
            }
        });
        CutoffPoint pt;
        pt.n = n;
        double slo = 0, shi = 0;
        long long cnt = 0;
        for (auto& o : outs) {
            if (o.skipped) {
                ++pt.skipped_envs;
                continue;
            }
            ++pt.used_envs;
            slo += o.sum_lo;
            shi += o.sum_hi;
            cnt += o.count;
        }
        if (cnt > 0) {
            pt.mean_tmix_lo = slo / double(cnt);
            pt.mean_tmix_hi = shi / double(cnt);
            pt.mean_window = pt.mean_tmix_lo - pt.mean_tmix_hi;
            pt.window_ratio = pt.mean_window / pt.mean_tmix_lo;
            pt.window_per_sqrtlog = pt.mean_window / std::sqrt(std::log(double(n)));
        }
        res.points.push_back(pt);
    }
    // h_hat from t_mix(x,eps) ~ log n / h + c
    std::vector<double> xs, ys;
    for (auto& pt : res.points)
        if (pt.used_envs > 0) {
            xs.push_back(std::log(double(pt.n)));
            ys.push_back(pt.mean_tmix_lo);
        }
    if (xs.size() >= 2) {
        LinFit f = least_squares(xs, ys);
        res.h_hat = f.slope > 0 ? 1.0 / f.slope : 0.0;
        res.fit_intercept = f.intercept;
        res.fit_r2 = f.r2;
    }
    return res;
}

FlatnessSplit l2_flatness(const std::vector<double>& pi, double b, int n) {
    FlatnessSplit out;
    out.threshold = std::pow(std::log(double(n)), b) / double(n);
    for (double v : pi) {
        if (v > out.threshold) {
            out.mass_large += v;
            ++out.count_large;
        } else {
            out.l2_small_sq += v * v;
        }
    }
    return out;
}

} // namespace permix
