#pragma once
// Mixture-of-permuted-chains model: the pair (P1, P2) on [n], the choice
// table p, the random matching environment, and the built-in families used
// throughout the tests. States are 0-based internally; file formats are
// 1-based.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "permix/matrix.hpp"
#include "permix/rng.hpp"

namespace permix {

// p(x, m): probability of moving with chain 1 when V1-state x is matched to
// V2-state n+m. Most specs use a constant table; keep the dense fallback.
struct PTable {
    bool constant = true;
    double c = 0.5;
    int n = 0;
    std::vector<double> dense; // row-major n*n, used when !constant

    double operator()(int x, int m) const {
        return constant ? c : dense[size_t(x) * size_t(n) + size_t(m)];
    }
};

struct MixtureSpec {
    int n = 0;
    StochasticMatrix P1; // n x n
    StochasticMatrix P2; // n x n
    PTable p;
    double delta_floor = 0.0; // min positive entry of P1, P2
    int Delta = 0;            // degree bound of the lifted graph
    std::string family;       // "demo", "counterexample", or "custom"

    void validate(double tol = 1e-12) const;
};

// Symmetric walk on 3-cycle components (one 4- or 5-cycle absorbs n mod 3)
// paired with lazy two-state flips; p identically 1/2. Requires n even.
MixtureSpec make_demo_spec(int n);

// ---------------------- environment ----------------------
// sigma: uniform bijection V1 -> V2, extended to the fixed-point-free
// involution eta on V = [2n]. Lifted states: 0..n-1 = V1, n..2n-1 = V2.
struct Environment {
    int n = 0;
    std::vector<int> sigma; // sigma[x] in [n, 2n) for x in [0, n)
    std::vector<int> eta;   // size 2n, eta[eta[x]] = x, eta[x] != x

    int block(int x) const { return x < n ? 0 : 1; }
};

Environment sample_environment(const MixtureSpec& spec, uint64_t seed);
// Environment from an explicit matching (planted constructions).
Environment environment_from_sigma(int n, std::vector<int> sigma);

} // namespace permix
