#include "permix/kernels.hpp"

namespace permix {

double stay_prob(const MixtureSpec& spec, const Environment& env, int x) {
    if (x < env.n) return spec.p(x, env.eta[x] - env.n);
    return 1.0 - spec.p(env.eta[x], x - env.n);
}

StochasticMatrix half_step_matrix(const MixtureSpec& spec, const Environment& env) {
    int N = 2 * env.n;
    std::vector<Triplet> t;
    t.reserve(2 * N);
    for (int x = 0; x < N; ++x) {
        double stay = stay_prob(spec, env, x);
        if (stay > 0.0) t.push_back({x, x, stay});
        if (stay < 1.0) t.push_back({x, env.eta[x], 1.0 - stay});
    }
    return StochasticMatrix::from_triplets(N, std::move(t));
}

StochasticMatrix block_kernel(const MixtureSpec& spec) {
    int n = spec.n;
    std::vector<Triplet> t;
    for (int x = 0; x < n; ++x)
        for (int k = spec.P1.row_begin(x); k < spec.P1.row_end(x); ++k)
            t.push_back({x, spec.P1.col[k], spec.P1.val[k]});
    for (int x = 0; x < n; ++x)
        for (int k = spec.P2.row_begin(x); k < spec.P2.row_end(x); ++k)
            t.push_back({n + x, n + spec.P2.col[k], spec.P2.val[k]});
    return StochasticMatrix::from_triplets(2 * n, std::move(t));
}

StochasticMatrix build_lifted_kernel(const MixtureSpec& spec, const Environment& env) {
    int n = env.n, N = 2 * n;
    std::vector<Triplet> t;
    for (int x = 0; x < N; ++x) {
        double stay = stay_prob(spec, env, x);
        int e = env.eta[x];
        // within-block part: stay * P(x, .)
        const StochasticMatrix& Pown = (x < n) ? spec.P1 : spec.P2;
        int off_own = (x < n) ? 0 : n;
        if (stay > 0.0)
            for (int k = Pown.row_begin(x - off_own); k < Pown.row_end(x - off_own); ++k)
                t.push_back({x, off_own + Pown.col[k], stay * Pown.val[k]});
        // cross-block part: (1 - stay) * P(eta(x), .)
        const StochasticMatrix& Pother = (e < n) ? spec.P1 : spec.P2;
        int off_other = (e < n) ? 0 : n;
        if (stay < 1.0)
            for (int k = Pother.row_begin(e - off_other); k < Pother.row_end(e - off_other);
                 ++k)
                t.push_back({x, off_other + Pother.col[k], (1.0 - stay) * Pother.val[k]});
    }
    return StochasticMatrix::from_triplets(N, std::move(t));
}

StochasticMatrix project_kernel(const StochasticMatrix& lifted, const Environment& env) {
    int n = env.n;
    std::vector<Triplet> t;
    for (int x = 0; x < n; ++x)
        for (int k = lifted.row_begin(x); k < lifted.row_end(x); ++k) {
            int y = lifted.col[k];
            int rep = y < n ? y : env.eta[y];
            t.push_back({x, rep, lifted.val[k]});
        }
    return StochasticMatrix::from_triplets(n, std::move(t));
}

StochasticMatrix mixture_kernel(const MixtureSpec& spec, const Environment& env) {
    int n = spec.n;
    std::vector<int> sigma_inv(n, -1); // V2 local index -> V1 state
    for (int x = 0; x < n; ++x) sigma_inv[env.sigma[x] - n] = x;
    std::vector<Triplet> t;
    for (int x = 0; x < n; ++x) {
        double p1 = spec.p(x, env.sigma[x] - n);
        if (p1 > 0.0)
            for (int k = spec.P1.row_begin(x); k < spec.P1.row_end(x); ++k)
                t.push_back({x, spec.P1.col[k], p1 * spec.P1.val[k]});
        if (p1 < 1.0) {
            int sx = env.sigma[x] - n;
            for (int k = spec.P2.row_begin(sx); k < spec.P2.row_end(sx); ++k)
                t.push_back({x, sigma_inv[spec.P2.col[k]], (1.0 - p1) * spec.P2.val[k]});
        }
    }
    return StochasticMatrix::from_triplets(n, std::move(t));
}

std::vector<double> project_distribution(const std::vector<double>& mu,
                                         const Environment& env) {
    std::vector<double> out(env.n, 0.0);
    for (int x = 0; x < env.n; ++x) out[x] = mu[x] + mu[env.eta[x]];
    return out;
}

int step(int state, long long tick, const MixtureSpec& spec, const Environment& env,
         Rng& rng) {
    if (tick % 2 == 0) {
        double stay = stay_prob(spec, env, state);
        return uniform01(rng) < stay ? state : env.eta[state];
    }
    int n = env.n;
    const StochasticMatrix& P = (state < n) ? spec.P1 : spec.P2;
    int off = (state < n) ? 0 : n;
    int row = state - off;
    double u = uniform01(rng);
    double acc = 0.0;
    int last = row;
    for (int k = P.row_begin(row); k < P.row_end(row); ++k) {
        acc += P.val[k];
        last = P.col[k];
        if (u < acc) return off + last;
    }
    return off + last; // roundoff fallthrough
}

// ---------------------- exact rational mirror ----------------------

static RatMatrix rat_zeros(int n) { return RatMatrix(n, std::vector<Rat>(n, Rat(0))); }

RatSpec make_demo_rat(int n) {
    MixtureSpec d = make_demo_spec(n);
    RatSpec rs;
    rs.n = n;
    rs.P1 = rat_zeros(n);
    rs.P2 = rat_zeros(n);
    Rat half(1, 2);
    for (int x = 0; x < n; ++x) {
        for (int k = d.P1.row_begin(x); k < d.P1.row_end(x); ++k)
            rs.P1[x][d.P1.col[k]] += half; // demo entries are exactly 1/2
        for (int k = d.P2.row_begin(x); k < d.P2.row_end(x); ++k)
            rs.P2[x][d.P2.col[k]] += half;
    }
    rs.p_const = half;
    return rs;
}

RatMatrix rat_half_step(const RatSpec& spec, const Environment& env) {
    int N = 2 * spec.n;
    RatMatrix H = rat_zeros(N);
    for (int x = 0; x < N; ++x) {
        Rat stay = (x < spec.n) ? spec.p_const : Rat(1) - spec.p_const;
        H[x][x] += stay;
        H[x][env.eta[x]] += Rat(1) - stay;
    }
    return H;
}

RatMatrix rat_block_kernel(const RatSpec& spec) {
    int n = spec.n;
    RatMatrix B = rat_zeros(2 * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            B[x][y] = spec.P1[x][y];
            B[n + x][n + y] = spec.P2[x][y];
        }
    return B;
}

RatMatrix rat_lifted_kernel(const RatSpec& spec, const Environment& env) {
    int n = spec.n, N = 2 * n;
    RatMatrix K = rat_zeros(N);
    for (int x = 0; x < N; ++x) {
        Rat stay = (x < n) ? spec.p_const : Rat(1) - spec.p_const;
        int e = env.eta[x];
        for (int y = 0; y < N; ++y) {
            if ((x < n) == (y < n)) {
                const RatMatrix& P = (x < n) ? spec.P1 : spec.P2;
                int off = (x < n) ? 0 : n;
                K[x][y] += stay * P[x - off][y - off];
            } else {
                const RatMatrix& P = (e < n) ? spec.P1 : spec.P2;
                int off = (e < n) ? 0 : n;
                K[x][y] += (Rat(1) - stay) * P[e - off][y - off];
            }
        }
    }
    return K;
}

RatMatrix rat_matmul(const RatMatrix& A, const RatMatrix& B) {
    int n = int(A.size());
    RatMatrix C = rat_zeros(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (A[i][k] == Rat(0)) continue;
            for (int j = 0; j < n; ++j)
                if (B[k][j] != Rat(0)) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

} // namespace permix
