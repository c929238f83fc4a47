#include "permix/model.hpp"

#include <algorithm>
#include <numeric>

namespace permix {

void MixtureSpec::validate(double tol) const {
    if (n <= 0) throw std::invalid_argument("spec: n must be positive");
    if (P1.n != n || P2.n != n) throw std::invalid_argument("spec: P1/P2 must be n x n");
    P1.validate_stochastic(tol);
    P2.validate_stochastic(tol);
    if (!p.constant && (p.n != n || p.dense.size() != size_t(n) * size_t(n)))
        throw std::invalid_argument("spec: dense p table must be n x n");
    auto check_p = [](double v) {
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("spec: p entry outside [0,1]");
    };
    if (p.constant)
        check_p(p.c);
    else
        for (double v : p.dense) check_p(v);
}

MixtureSpec make_demo_spec(int n) {
    if (n < 4) throw std::invalid_argument("demo spec: n >= 4 required");
    if (n % 2 != 0) throw std::invalid_argument("demo spec: n must be even (P2 pairs)");

    // P1: consecutive cycle components, size 3 except one component of size
    // 4 or 5 soaking up n mod 3; symmetric nearest-neighbour walk on each.
    std::vector<Triplet> t1;
    int first_len = (n % 3 == 0) ? 3 : 3 + (n % 3);
    int start = 0;
    while (start < n) {
        int len = (start == 0) ? first_len : 3;
        for (int i = 0; i < len; ++i) {
            int x = start + i;
            int fwd = start + (i + 1) % len;
            int bwd = start + (i + len - 1) % len;
            t1.push_back({x, fwd, 0.5});
            t1.push_back({x, bwd, 0.5});
        }
        start += len;
    }

    // P2: lazy flips on pairs {2k, 2k+1}.
    std::vector<Triplet> t2;
    for (int k = 0; 2 * k + 1 < n; ++k) {
        int a = 2 * k, b = 2 * k + 1;
        t2.push_back({a, a, 0.5});
        t2.push_back({a, b, 0.5});
        t2.push_back({b, b, 0.5});
        t2.push_back({b, a, 0.5});
    }

    MixtureSpec spec;
    spec.n = n;
    spec.P1 = StochasticMatrix::from_triplets(n, std::move(t1));
    spec.P2 = StochasticMatrix::from_triplets(n, std::move(t2));
    spec.p.constant = true;
    spec.p.c = 0.5;
    spec.delta_floor = 0.5;
    spec.Delta = 3;
    spec.family = "demo";
    spec.validate();
    return spec;
}

Environment sample_environment(const MixtureSpec& spec, uint64_t seed) {
    int n = spec.n;
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), n);
    Rng rng = make_rng(seed, /*task=*/0x5160);
    // Fisher-Yates, high index down, uniform over all n! bijections.
    for (int i = n - 1; i > 0; --i) {
        int j = int(rng() % uint64_t(i + 1));
        std::swap(sigma[i], sigma[j]);
    }
    return environment_from_sigma(n, std::move(sigma));
}

Environment environment_from_sigma(int n, std::vector<int> sigma) {
    if (int(sigma.size()) != n) throw std::invalid_argument("sigma size != n");
    Environment env;
    env.n = n;
    env.eta.assign(2 * n, -1);
    for (int x = 0; x < n; ++x) {
        int y = sigma[x];
        if (y < n || y >= 2 * n) throw std::invalid_argument("sigma value outside V2");
        if (env.eta[y] != -1) throw std::invalid_argument("sigma not injective");
        env.eta[x] = y;
        env.eta[y] = x;
    }
    for (int v = 0; v < 2 * n; ++v)
        if (env.eta[v] == -1) throw std::invalid_argument("sigma not surjective");
    env.sigma = std::move(sigma);
    return env;
}

} // namespace permix
