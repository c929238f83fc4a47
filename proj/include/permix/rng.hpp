#pragma once
// Seeding and small sampling helpers. Every task derives its own stream from
// (base seed, task id) so ensembles reproduce independently of worker count.

#include <cstdint>
#include <random>

namespace permix {

using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mix base and task id into one well-spread 64-bit seed.
inline uint64_t derive_seed(uint64_t base, uint64_t task) {
    uint64_t s = base;
    uint64_t a = splitmix64(s);
    s ^= task * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL;
    uint64_t b = splitmix64(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

inline Rng make_rng(uint64_t base, uint64_t task = 0) {
    return Rng(derive_seed(base, task));
}

inline double uniform01(Rng& rng) {
    // 53-bit mantissa draw in [0,1)
    return double(rng() >> 11) * 0x1.0p-53;
}

// Index into a short unnormalized weight array (rows here have <= 4 entries,
// linear scan beats alias tables).
inline int pick_weighted(const double* w, int k, double total, Rng& rng) {
    double u = uniform01(rng) * total;
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        acc += w[i];
        if (u < acc) return i;
    }
    return k - 1; // roundoff fallthrough
}

} // namespace permix
