#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "permix/kernels.hpp"
#include "permix/mixing.hpp"
#include "permix/model.hpp"

using namespace permix;

TEST_CASE("tv distance basics") {
    CHECK(tv_distance({1, 0}, {1, 0}) == 0.0);
    CHECK(tv_distance({1, 0}, {0, 1}) == 1.0);
    CHECK(tv_distance({0.5, 0.5}, {0.75, 0.25}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(tv_distance({1.0}, {0.5, 0.5}), std::invalid_argument);

    // metric properties on random triples
    Rng rng = make_rng(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto draw = [&]() {
            std::vector<double> v(5);
            double s = 0;
            for (double& x : v) {
                x = uniform01(rng);
                s += x;
            }
            for (double& x : v) x /= s;
            return v;
        };
        auto a = draw(), b = draw(), c = draw();
        CHECK(tv_distance(a, b) == doctest::Approx(tv_distance(b, a)));
        CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    }
}

TEST_CASE("stationary distribution examples") {
    auto K2 = StochasticMatrix::from_triplets(
        2, {{0, 0, 0.9}, {0, 1, 0.1}, {1, 0, 0.2}, {1, 1, 0.8}});
    auto pi = stationary_distribution(K2);
    CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    // Q1 segment, delta = 0.05: detailed balance gives ratios 1/19
    double d = 0.05;
    auto Q1 = StochasticMatrix::from_triplets(3, {{0, 0, 1 - d},
                                                  {0, 1, d},
                                                  {1, 0, 1 - d},
                                                  {1, 2, d},
                                                  {2, 1, 1 - d},
                                                  {2, 2, d}});
    auto piq = stationary_distribution(Q1);
    CHECK(piq[1] / piq[0] == doctest::Approx(1.0 / 19.0).epsilon(1e-8));
    CHECK(piq[2] / piq[1] == doctest::Approx(1.0 / 19.0).epsilon(1e-8));

    // doubly stochastic: uniform
    auto DS = StochasticMatrix::from_triplets(
        3, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 0, 0.5}, {1, 2, 0.5}, {2, 0, 0.5}, {2, 1, 0.5}});
    auto piu = stationary_distribution(DS);
    for (double v : piu) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    // residual contract
    std::vector<double> piK;
    left_multiply(K2, pi, piK);
    double res = 0;
    for (int i = 0; i < 2; ++i) res += std::abs(piK[i] - pi[i]);
    CHECK(res <= 1e-12);

    // two closed classes
    auto R = StochasticMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(stationary_distribution(R), NotIrreducible);
}

TEST_CASE("mixing profile: degenerate kernels") {
    // identity never mixes: capped, tmix = -1
    auto I3 = StochasticMatrix::from_triplets(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
    std::vector<double> unif(3, 1.0 / 3.0);
    MixingProfile prof = mixing_profile(I3, unif, 0, {0.25}, 20);
    CHECK(prof.capped);
    CHECK(prof.tmix.at(0.25) == -1);

    // all rows equal pi: exact stationarity after one step
    auto K = StochasticMatrix::from_triplets(
        2, {{0, 0, 0.7}, {0, 1, 0.3}, {1, 0, 0.7}, {1, 1, 0.3}});
    std::vector<double> pi{0.7, 0.3};
    MixingProfile p2 = mixing_profile(K, pi, 1, {0.25, 0.01}, 20);
    CHECK(p2.tmix.at(0.25) == 1);
    CHECK(p2.tmix.at(0.01) == 1);
}

TEST_CASE("mixing profile equals dense matrix powers on TINY6") {
    MixtureSpec spec = make_demo_spec(6);
    Environment env = sample_environment(spec, 31);
    StochasticMatrix scp = build_lifted_kernel(spec, env);
    auto pi = stationary_distribution(scp);
    MixingProfile prof = mixing_profile(scp, pi, 1, {0.25, 0.05}, 400);

    // dense power oracle
    auto D = to_dense(scp);
    int N = 12;
    std::vector<double> row(N, 0.0);
    row[1] = 1.0;
    long long oracle_t = -1;
    for (long long t = 0; t < 400 && oracle_t < 0; ++t) {
        double tv = 0;
        for (int j = 0; j < N; ++j) tv += std::abs(row[j] - pi[j]);
        tv *= 0.5;
        CHECK(tv == doctest::Approx(prof.tv_curve[size_t(t)]).epsilon(1e-10));
        if (tv < 0.25) {
            oracle_t = t;
            break;
        }
        std::vector<double> nxt(N, 0.0);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) nxt[j] += row[i] * D[i][j];
        row = nxt;
    }
    CHECK(oracle_t == prof.tmix.at(0.25));
    CHECK(find_tmix(scp, pi, 1, 0.25, 400) == prof.tmix.at(0.25));
    CHECK(find_tmix(scp, pi, 1, 0.05, 400) == prof.tmix.at(0.05));

    // TV curve to stationarity never increases
    for (size_t t = 1; t < prof.tv_curve.size(); ++t)
        CHECK(prof.tv_curve[t] <= prof.tv_curve[t - 1] + 1e-12);
}

TEST_CASE("projection of the lifted evolution is the mixture evolution") {
    MixtureSpec spec = make_demo_spec(24);
    for (uint64_t seed : {3u, 4u, 5u}) {
        Environment env = sample_environment(spec, seed);
        StochasticMatrix scp = build_lifted_kernel(spec, env);
        StochasticMatrix bar = mixture_kernel(spec, env);
        std::vector<double> pi_l, pi_b;
        try {
            pi_l = stationary_distribution(scp);
            pi_b = stationary_distribution(bar);
        } catch (const NotIrreducible&) {
            continue;
        }
        std::vector<double> pibar_proj = project_distribution(pi_l, env);
        CHECK(tv_distance(pibar_proj, pi_b) <= 1e-9);

        int x = 5;
        std::vector<double> mu(48, 0.0), mub(24, 0.0), t1, t2;
        mu[x] = 1.0;
        mub[x] = 1.0;
        for (int t = 0; t <= 60; ++t) {
            // projected lifted law equals the mixture law started at x
            auto proj = project_distribution(mu, env);
            for (int y = 0; y < 24; ++y) REQUIRE(std::abs(proj[y] - mub[y]) <= 1e-12);
            // projection inequality for TV to the respective stationary laws
            CHECK(tv_distance(proj, pibar_proj) <= tv_distance(mu, pi_l) + 1e-12);
            left_multiply(scp, mu, t1);
            mu.swap(t1);
            left_multiply(bar, mub, t2);
            mub.swap(t2);
        }
    }
}

TEST_CASE("cutoff scan smoke: shrinking windows, positive rate fit") {
    CutoffScanResult res = cutoff_scan({48, 96, 192}, 0.25, 3, 3, 2024, 2);
    REQUIRE(res.points.size() == 3);
    for (auto& pt : res.points) {
        CHECK(pt.used_envs > 0);
        CHECK(pt.mean_tmix_lo >= pt.mean_tmix_hi); // eps < 1-eps thresholds
    }
    CHECK(res.h_hat > 0.0);
    // symmetric threshold sits between the two one-sided ones
    MixtureSpec spec = make_demo_spec(48);
    Environment env = sample_environment(spec, 77);
    StochasticMatrix bar = mixture_kernel(spec, env);
    auto pi = stationary_distribution(bar);
    long long lo = find_tmix(bar, pi, 0, 0.25, 5000);
    long long mid = find_tmix(bar, pi, 0, 0.5, 5000);
    long long hi = find_tmix(bar, pi, 0, 0.75, 5000);
    CHECK(hi <= mid);
    CHECK(mid <= lo);
}

TEST_CASE("l2 flatness split") {
    // uniform pi: everything below threshold for b >= 1
    std::vector<double> unif(100, 0.01);
    FlatnessSplit fs = l2_flatness(unif, 1.0, 100);
    CHECK(fs.mass_large == 0.0);
    CHECK(fs.l2_small_sq == doctest::Approx(0.01));

    // point mass lands above any sane threshold
    std::vector<double> point(100, 0.0);
    point[3] = 1.0;
    FlatnessSplit fp = l2_flatness(point, 1.0, 100);
    CHECK(fp.mass_large == doctest::Approx(1.0));
    CHECK(fp.count_large == 1);
}
