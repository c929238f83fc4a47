#include "permix/hypotheses.hpp"

#include <algorithm>
#include <queue>

namespace permix {

// Forward BFS on the support of P from x, early exit once cap states found.
static int reach_size(const StochasticMatrix& P, int x, int cap) {
    std::vector<int> seen;
    std::vector<char> mark(P.n, 0);
    std::queue<int> q;
    q.push(x);
    mark[x] = 1;
    int count = 0;
    while (!q.empty() && count < cap) {
        int v = q.front();
        q.pop();
        ++count;
        for (int k = P.row_begin(v); k < P.row_end(v); ++k) {
            int w = P.col[k];
            if (!mark[w]) {
                mark[w] = 1;
                q.push(w);
            }
        }
    }
    return count;
}

// Shortest s >= 0 with P^s(y,x) > 0, or -1 if none within l steps.
static int return_depth(const StochasticMatrix& P, int y, int x, int l) {
    if (y == x) return 0;
    std::vector<char> mark(P.n, 0);
    std::vector<int> frontier{y};
    mark[y] = 1;
    for (int depth = 1; depth <= l; ++depth) {
        std::vector<int> next;
        for (int v : frontier)
            for (int k = P.row_begin(v); k < P.row_end(v); ++k) {
                int w = P.col[k];
                if (w == x) return depth;
                if (!mark[w]) {
                    mark[w] = 1;
                    next.push_back(w);
                }
            }
        frontier.swap(next);
        if (frontier.empty()) break;
    }
    return -1;
}

HypothesisReport validate_hypotheses(const MixtureSpec& spec, int l_max,
                                     double h4_min_fraction) {
    spec.validate();
    int n = spec.n;
    HypothesisReport rep;

    // entry floor and column sums
    rep.entry_floor = 1.0;
    std::vector<double> col1(n, 0.0), col2(n, 0.0);
    for (int x = 0; x < n; ++x) {
        for (int k = spec.P1.row_begin(x); k < spec.P1.row_end(x); ++k) {
            rep.entry_floor = std::min(rep.entry_floor, spec.P1.val[k]);
            col1[spec.P1.col[k]] += spec.P1.val[k];
        }
        for (int k = spec.P2.row_begin(x); k < spec.P2.row_end(x); ++k) {
            rep.entry_floor = std::min(rep.entry_floor, spec.P2.val[k]);
            col2[spec.P2.col[k]] += spec.P2.val[k];
        }
    }
    rep.max_col_sum_1 = *std::max_element(col1.begin(), col1.end());
    rep.max_col_sum_2 = *std::max_element(col2.begin(), col2.end());
    rep.h1 = rep.entry_floor > 0.0;

    // choice-table floor
    rep.p_floor = 1.0;
    if (spec.p.constant) {
        rep.p_floor = std::min(spec.p.c, 1.0 - spec.p.c);
    } else {
        for (double v : spec.p.dense) rep.p_floor = std::min(rep.p_floor, std::min(v, 1.0 - v));
    }
    rep.h2 = rep.p_floor > 0.0;

    // reachable-set sizes
    rep.reach_1.resize(n);
    rep.reach_2.resize(n);
    rep.h3 = true;
    for (int x = 0; x < n; ++x) {
        rep.reach_1[x] = reach_size(spec.P1, x, HypothesisReport::reach_cap);
        rep.reach_2[x] = reach_size(spec.P2, x, HypothesisReport::reach_cap);
        if (rep.reach_1[x] < 3 || rep.reach_2[x] < 2) rep.h3 = false;
    }

    // S(l) block-wise; a state fails at level l if some out-edge has no
    // return loop of length <= l.
    rep.s_l_size.assign(l_max, 0);
    rep.s_l_fraction.assign(l_max, 0.0);
    auto min_loop = [&](const StochasticMatrix& P, int x) {
        // largest over out-edges of the shortest return depth; -1 if some
        // edge never returns within l_max
        int worst = 0;
        for (int k = P.row_begin(x); k < P.row_end(x); ++k) {
            int d = return_depth(P, P.col[k], x, l_max);
            if (d < 0) return -1;
            worst = std::max(worst, d);
        }
        return worst;
    };
    for (int x = 0; x < n; ++x) {
        int w1 = min_loop(spec.P1, x);
        int w2 = min_loop(spec.P2, x);
        if (w1 >= 0)
            for (int l = std::max(1, w1); l <= l_max; ++l) ++rep.s_l_size[l - 1];
        if (w2 >= 0)
            for (int l = std::max(1, w2); l <= l_max; ++l) ++rep.s_l_size[l - 1];
    }
    rep.h4 = false;
    for (int l = 1; l <= l_max; ++l) {
        rep.s_l_fraction[l - 1] = double(rep.s_l_size[l - 1]) / double(2 * n);
        if (rep.s_l_fraction[l - 1] >= h4_min_fraction) rep.h4 = true;
    }

    // degree bound: distinct SR neighbours (out or in support, self excluded)
    // plus the one long-range edge every state gets.
    std::vector<std::vector<int>> nbrs(2 * n);
    auto add_edges = [&](const StochasticMatrix& P, int off) {
        for (int x = 0; x < P.n; ++x)
            for (int k = P.row_begin(x); k < P.row_end(x); ++k) {
                int y = P.col[k];
                if (y == x) continue;
                nbrs[off + x].push_back(off + y);
                nbrs[off + y].push_back(off + x);
            }
    };
    add_edges(spec.P1, 0);
    add_edges(spec.P2, n);
    int deg = 0;
    for (int v = 0; v < 2 * n; ++v) {
        auto& a = nbrs[v];
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        deg = std::max(deg, int(a.size()) + 1);
    }
    rep.delta_computed = deg;
    return rep;
}

} // namespace permix
