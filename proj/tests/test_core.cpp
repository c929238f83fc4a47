#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "permix/hypotheses.hpp"
#include "permix/kernels.hpp"
#include "permix/model.hpp"
#include "permix/stats.hpp"

using namespace permix;

// TINY6: demo spec at n=6 with the identity-shift matching sigma(x) = x + 6,
// the worked example used to freeze kernel entries by hand.
static Environment tiny6_env() {
    std::vector<int> sigma{6, 7, 8, 9, 10, 11};
    return environment_from_sigma(6, std::move(sigma));
}

TEST_CASE("sparse matrix basics") {
    auto M = StochasticMatrix::from_triplets(
        3, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 0, 1.0}, {2, 2, 1.0}, {0, 1, 0.0}});
    CHECK(M.at(0, 1) == doctest::Approx(0.5));
    CHECK(M.at(0, 0) == 0.0);
    CHECK(M.row_sum(0) == doctest::Approx(1.0));
    M.validate_stochastic();

    std::vector<double> mu{1.0, 0.0, 0.0}, out;
    left_multiply(M, mu, out);
    CHECK(out[1] == doctest::Approx(0.5));
    CHECK(out[2] == doctest::Approx(0.5));

    auto bad = StochasticMatrix::from_triplets(2, {{0, 0, 0.7}, {1, 1, 1.0}});
    CHECK_THROWS_AS(bad.validate_stochastic(), std::invalid_argument);
}

TEST_CASE("scc recurrent classification") {
    // 0 -> 1 -> 2 -> 1 (0 transient, {1,2} closed)
    auto M = StochasticMatrix::from_triplets(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}});
    auto scc = strongly_connected_components(M);
    CHECK(scc.count == 2);
    int closed = 0;
    for (int c = 0; c < scc.count; ++c) closed += scc.is_recurrent[c];
    CHECK(closed == 1);
    CHECK(scc.comp_of[1] == scc.comp_of[2]);
    CHECK(scc.comp_of[0] != scc.comp_of[1]);
}

TEST_CASE("demo spec structure") {
    for (int n : {4, 6, 10, 12, 96}) {
        MixtureSpec spec = make_demo_spec(n);
        spec.validate();
        CHECK(spec.Delta == 3);
        CHECK(spec.delta_floor == doctest::Approx(0.5));
    }
    CHECK_THROWS(make_demo_spec(7)); // odd n has no pair partition
}

TEST_CASE("environment sampling is a uniform matching") {
    MixtureSpec spec = make_demo_spec(4);
    // involution structure
    Environment e = sample_environment(spec, 12345);
    for (int v = 0; v < 8; ++v) {
        CHECK(e.eta[e.eta[v]] == v);
        CHECK(e.eta[v] != v);
        CHECK((v < 4) != (e.eta[v] < 4));
    }
    // chi-square over all 4! = 24 bijections
    std::map<std::vector<int>, long long> counts;
    const long long N = 100000;
    for (long long s = 0; s < N; ++s)
        counts[sample_environment(spec, uint64_t(s)).sigma] += 1;
    CHECK(counts.size() == 24);
    std::vector<long long> c;
    for (auto& kv : counts) c.push_back(kv.second);
    std::vector<double> expected(24, double(N) / 24.0);
    double stat = chi_square_stat(c, expected);
    CHECK(stat < chi_square_critical(23, 3.0));
}

TEST_CASE("lifted kernel matches the hand-computed TINY6 entries") {
    MixtureSpec spec = make_demo_spec(6);
    Environment env = tiny6_env();
    StochasticMatrix scp = build_lifted_kernel(spec, env);
    scp.validate_stochastic();
    // 1-based worked values: scP(1,2) = scP(1,3) = scP(1,7) = scP(1,8) = 1/4
    CHECK(scp.at(0, 1) == doctest::Approx(0.25));
    CHECK(scp.at(0, 2) == doctest::Approx(0.25));
    CHECK(scp.at(0, 6) == doctest::Approx(0.25));
    CHECK(scp.at(0, 7) == doctest::Approx(0.25));
    CHECK(scp.row_sum(0) == doctest::Approx(1.0));
}

TEST_CASE("half step composed with block step equals the lifted kernel") {
    MixtureSpec spec = make_demo_spec(6);
    for (uint64_t seed : {1u, 2u, 3u}) {
        Environment env = sample_environment(spec, seed);
        auto H1 = to_dense(half_step_matrix(spec, env));
        auto H2 = to_dense(block_kernel(spec));
        auto K = to_dense(build_lifted_kernel(spec, env));
        int N = 12;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                double comp = 0.0;
                for (int k = 0; k < N; ++k) comp += H1[i][k] * H2[k][j];
                CHECK(std::abs(comp - K[i][j]) <= 1e-15);
            }
    }
}

TEST_CASE("rational mode: composition identity is exact") {
    for (int n : {6, 12, 24}) {
        RatSpec rs = make_demo_rat(n);
        MixtureSpec spec = make_demo_spec(n);
        Environment env = sample_environment(spec, 99 + uint64_t(n));
        RatMatrix H1 = rat_half_step(rs, env);
        RatMatrix H2 = rat_block_kernel(rs);
        RatMatrix prod = rat_matmul(H1, H2);
        RatMatrix K = rat_lifted_kernel(rs, env);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) REQUIRE(prod[i][j] == K[i][j]);
    }
}

TEST_CASE("projected two-lift equals the direct mixture kernel") {
    for (int n : {6, 12, 24}) {
        MixtureSpec spec = make_demo_spec(n);
        for (uint64_t s = 0; s < 5; ++s) {
            Environment env = sample_environment(spec, derive_seed(7, s));
            StochasticMatrix lifted = build_lifted_kernel(spec, env);
            StochasticMatrix bar = project_kernel(lifted, env);
            StochasticMatrix direct = mixture_kernel(spec, env);
            bar.validate_stochastic();
            direct.validate_stochastic();
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    REQUIRE(std::abs(bar.at(x, y) - direct.at(x, y)) <= 1e-12);
        }
    }
}

TEST_CASE("tick sampler matches the kernel rows (multinomial, 4 sigma)") {
    MixtureSpec spec = make_demo_spec(6);
    Environment env = tiny6_env();
    StochasticMatrix scp = build_lifted_kernel(spec, env);
    const long long N = 1000000;
    Rng rng = make_rng(2024, 7);

    // full step = even tick then odd tick from state 0
    std::vector<long long> counts(12, 0);
    for (long long i = 0; i < N; ++i) {
        int mid = step(0, 0, spec, env, rng);
        int out = step(mid, 1, spec, env, rng);
        ++counts[out];
    }
    for (int y = 0; y < 12; ++y) {
        double p = scp.at(0, y);
        double sigma = std::sqrt(double(N) * p * (1.0 - p));
        CHECK(std::abs(double(counts[y]) - double(N) * p) <= 4.0 * sigma + 1.0);
    }
}

TEST_CASE("p identically 1 keeps the walk inside its block") {
    MixtureSpec spec = make_demo_spec(6);
    spec.p.c = 1.0;
    Environment env = tiny6_env();
    Rng rng = make_rng(5, 5);
    int x = 2;
    for (long long tick = 0; tick < 1000; ++tick) {
        x = step(x, tick, spec, env, rng);
        CHECK(x < 6);
    }
}

TEST_CASE("hypothesis report on the demo family") {
    MixtureSpec spec = make_demo_spec(12);
    HypothesisReport rep = validate_hypotheses(spec, 3);
    CHECK(rep.h1);
    CHECK(rep.h2);
    CHECK(rep.h3);
    CHECK(rep.h4);
    CHECK(rep.entry_floor == doctest::Approx(0.5));
    CHECK(rep.p_floor == doctest::Approx(0.5));
    CHECK(rep.delta_computed == 3);
    // symmetric walks: every out-edge returns in one step, S(1) = everything
    CHECK(rep.s_l_size[0] == 24);
    CHECK(rep.s_l_fraction[0] == doctest::Approx(1.0));
}

TEST_CASE("hypothesis failure cases are detected") {
    // P1 = directed deterministic 3-cycles: reach stays 3 but no 1-step
    // return, so S(1) loses every x while S(2) recovers it.
    int n = 6;
    std::vector<Triplet> t1;
    for (int s = 0; s < n; s += 3)
        for (int i = 0; i < 3; ++i) t1.push_back({s + i, s + (i + 1) % 3, 1.0});
    MixtureSpec spec = make_demo_spec(n);
    spec.P1 = StochasticMatrix::from_triplets(n, std::move(t1));
    HypothesisReport rep = validate_hypotheses(spec, 3);
    CHECK(rep.s_l_size[0] == 6);  // pairs still return in one step
    CHECK(rep.s_l_size[1] == 12); // 3-cycles return in two
    CHECK(rep.h4);

    // two-state P1 components violate the reach >= 3 requirement
    std::vector<Triplet> t2;
    for (int k = 0; k < n; k += 2) {
        t2.push_back({k, k + 1, 1.0});
        t2.push_back({k + 1, k, 1.0});
    }
    MixtureSpec spec2 = make_demo_spec(n);
    spec2.P1 = StochasticMatrix::from_triplets(n, std::move(t2));
    CHECK_FALSE(validate_hypotheses(spec2, 3).h3);
}

TEST_CASE("stats helpers") {
    RunningStat rs;
    for (double v : {1.0, 2.0, 3.0, 4.0}) rs.push(v);
    CHECK(rs.mean == doctest::Approx(2.5));
    CHECK(rs.variance() == doctest::Approx(5.0 / 3.0));

    auto ci = wilson_ci(50, 100, 3.0);
    CHECK(ci.lo < 0.5);
    CHECK(ci.hi > 0.5);
    CHECK(ci.lo > 0.3);
    CHECK(ci.hi < 0.7);

    LinFit f = least_squares({1, 2, 3, 4}, {2.1, 3.9, 6.1, 7.9});
    CHECK(f.slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(f.r2 > 0.99);

    CHECK(quantile({5, 1, 4, 2, 3}, 0.5) == doctest::Approx(3.0));
}
