#include "permix/path_topology.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <queue>
#include <unordered_set>

#include "permix/kernels.hpp"

namespace permix {

// ---------------------- trajectories ----------------------

Trajectory simulate_trajectory(const MixtureSpec& spec, const Environment& env,
                               int start, long long n_steps, Rng& rng) {
    Trajectory traj;
    traj.states.reserve(size_t(2 * n_steps + 1));
    traj.states.push_back(start);
    int cur = start;
    for (long long tick = 0; tick < 2 * n_steps; ++tick) {
        int nxt = step(cur, tick, spec, env, rng);
        if (tick % 2 == 0 && nxt != cur)
            traj.lr.push_back(LrCrossing{tick + 1, LrEdge{cur, nxt}});
        traj.states.push_back(nxt);
        cur = nxt;
    }
    return traj;
}

void validate_trajectory(const Trajectory& traj, const MixtureSpec& spec,
                         const Environment& env) {
    if (traj.states.empty()) throw std::invalid_argument("trajectory: empty");
    const int n = spec.n;
    size_t ci = 0;
    for (size_t k = 0; k + 1 < traj.states.size(); ++k) {
        const int a = traj.states[k];
        const int b = traj.states[k + 1];
        if (a < 0 || a >= 2 * n || b < 0 || b >= 2 * n)
            throw std::invalid_argument("trajectory: state out of range");
        if (k % 2 == 0) {
            const bool jump = b == env.eta[size_t(a)];
            if (!jump && b != a)
                throw std::invalid_argument("trajectory: illegal matching move");
            if (jump) {
                if (ci >= traj.lr.size() || traj.lr[ci].tick != (long long)k + 1 ||
                    traj.lr[ci].edge != LrEdge{a, b})
                    throw std::invalid_argument("trajectory: crossing list mismatch");
                ++ci;
            }
        } else {
            if (env.block(a) != env.block(b))
                throw std::invalid_argument("trajectory: P move crosses blocks");
            const double entry = a < n ? spec.P1.at(a, b) : spec.P2.at(a - n, b - n);
            if (entry <= 0.0)
                throw std::invalid_argument("trajectory: P move outside support");
        }
    }
    if (ci != traj.lr.size())
        throw std::invalid_argument("trajectory: extra crossings listed");
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
    os << "tick,state,lr\n";
    size_t ci = 0;
    for (size_t k = 0; k < traj.states.size(); ++k) {
        int flag = 0;
        if (ci < traj.lr.size() && traj.lr[ci].tick == (long long)k) {
            flag = 1;
            ++ci;
        }
        os << k << ',' << traj.states[k] + 1 << ',' << flag << '\n';
    }
}

// ---------------------- loop erasure ----------------------

LoopErasedTrace loop_erase(const std::vector<LrEdge>& lr_path) {
    LoopErasedTrace out;
    out.xi.reserve(lr_path.size());
    for (const LrEdge& e : lr_path) {
        if (!out.xi.empty() && out.xi.back() == reversed(e))
            out.xi.pop_back();
        else
            out.xi.push_back(e);
    }
    return out;
}

static std::vector<LrEdge> crossing_edges(const Trajectory& traj) {
    std::vector<LrEdge> edges;
    edges.reserve(traj.lr.size());
    for (const LrCrossing& c : traj.lr) edges.push_back(c.edge);
    return edges;
}

LoopErasedTrace loop_erase(const Trajectory& traj) {
    return loop_erase(crossing_edges(traj));
}

// ---------------------- backtracking ----------------------

int backtrack_position(const std::vector<LrEdge>& lr_path, int L) {
    if (L < 1) throw std::invalid_argument("backtrack: L >= 1 required");
    const int m = (int)lr_path.size();
    // A pattern finishing at index k occupies exactly [k-2L+1, k], so scanning
    // the single window per k in order yields the earliest completion.
    for (int k = 2 * L - 1; k < m; ++k) {
        const int i = k - 2 * L + 1;
        bool match = true;
        for (int j = 0; j < L && match; ++j)
            if (lr_path[size_t(i + L + j)] != reversed(lr_path[size_t(i + L - 1 - j)]))
                match = false;
        if (!match) continue;
        bool distinct = true;
        for (int a = i; a < i + L && distinct; ++a)
            for (int b = a + 1; b < i + L && distinct; ++b)
                if (lr_path[size_t(a)] == lr_path[size_t(b)]) distinct = false;
        if (distinct) return k;
    }
    return -1;
}

long long detect_backtrack(const Trajectory& traj, int L) {
    const int pos = backtrack_position(crossing_edges(traj), L);
    return pos < 0 ? -1 : traj.lr[size_t(pos)].tick;
}

// ---------------------- small-range graph and deviation ----------------------

SrGraph sr_graph(const MixtureSpec& spec) {
    SrGraph g;
    g.n2 = 2 * spec.n;
    g.out.assign(size_t(g.n2), {});
    for (int x = 0; x < spec.n; ++x) {
        for (int k = spec.P1.row_begin(x); k < spec.P1.row_end(x); ++k)
            g.out[size_t(x)].push_back(spec.P1.col[size_t(k)]);
        for (int k = spec.P2.row_begin(x); k < spec.P2.row_end(x); ++k)
            g.out[size_t(spec.n + x)].push_back(spec.n + spec.P2.col[size_t(k)]);
    }
    return g;
}

std::unordered_map<int, int> sr_distances(const SrGraph& sr, int src, int cap) {
    std::unordered_map<int, int> dist;
    if (cap < 0) return dist;
    dist.emplace(src, 0);
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        const int d = dist[u];
        if (d == cap) continue;
        for (int v : sr.out[size_t(u)])
            if (dist.emplace(v, d + 1).second) q.push(v);
    }
    return dist;
}

long long detect_deviation(const Trajectory& traj, const SrGraph& sr, int R) {
    if (R < 1) throw std::invalid_argument("deviation: R >= 1 required");
    if (traj.states.empty()) return -1;
    std::unordered_map<int, std::unordered_map<int, int>> cache;
    int center = traj.states[0];
    const std::unordered_map<int, int>* dist = nullptr;
    size_t ci = 0;
    for (size_t k = 0; k < traj.states.size(); ++k) {
        while (ci < traj.lr.size() && traj.lr[ci].tick == (long long)k) {
            center = traj.lr[ci].edge.to;
            dist = nullptr;
            ++ci;
        }
        if (dist == nullptr) {
            auto it = cache.find(center);
            if (it == cache.end())
                it = cache.emplace(center, sr_distances(sr, center, R)).first;
            dist = &it->second;
        }
        auto it = dist->find(traj.states[k]);
        if (it == dist->end() || it->second >= R) return (long long)k;
    }
    return -1;
}

// ---------------------- regeneration edges ----------------------

RegenScan regeneration_edges(const Trajectory& traj, int L, long long W_ticks) {
    if (L < 1) throw std::invalid_argument("regeneration: L >= 1 required");
    if (W_ticks < 1) throw std::invalid_argument("regeneration: W >= 1 required");
    RegenScan scan;
    scan.window_warning = W_ticks < 4LL * L;
    if (traj.states.empty()) return scan;
    const long long t_end = (long long)traj.states.size() - 1;

    std::unordered_map<int, long long> first_visit;
    for (long long k = 0; k <= t_end; ++k)
        first_visit.emplace(traj.states[size_t(k)], k);
    std::unordered_map<long long, size_t> cross_at;
    for (size_t i = 0; i < traj.lr.size(); ++i)
        cross_at.emplace(traj.lr[i].tick, i);

    std::unordered_set<long long> seen;
    for (size_t i = 0; i < traj.lr.size(); ++i) {
        const LrEdge e = traj.lr[i].edge;
        const long long key =
            ((long long)std::min(e.from, e.to) << 32) | (unsigned)std::max(e.from, e.to);
        if (!seen.insert(key).second) continue;
        ++scan.first_crossings;
        const long long t0 = traj.lr[i].tick;
        const int endpoint =
            first_visit[e.from] <= first_visit[e.to] ? e.from : e.to;

        std::vector<LrEdge> stack;
        int verdict = -1; // -1 open, 0 returned, 1 qualifies
        const long long last = std::min(t0 + W_ticks, t_end);
        for (long long s = t0 + 1; s <= last; ++s) {
            auto itc = cross_at.find(s);
            if (itc != cross_at.end()) {
                const LrEdge ce = traj.lr[itc->second].edge;
                if (!stack.empty() && stack.back() == reversed(ce))
                    stack.pop_back();
                else
                    stack.push_back(ce);
            }
            if (traj.states[size_t(s)] == endpoint) {
                verdict = 0;
                break;
            }
            if ((int)stack.size() >= L) {
                verdict = 1;
                break;
            }
        }

        RegenEvent ev;
        ev.tick = t0;
        ev.edge = e;
        ev.in_tail = t0 + W_ticks > t_end;
        if (verdict == -1) {
            if (ev.in_tail) {
                // the trajectory genuinely ended before any return
                verdict = 1;
            } else {
                verdict = 1;
                ev.resolved = false;
                ev.assumed = true;
                ++scan.unresolved_assumed;
            }
        }
        if (verdict == 1) {
            if (ev.in_tail) ++scan.in_tail_count;
            scan.regen.push_back(ev);
        }
    }
    return scan;
}

// ---------------------- path class Gamma(R, L, M) ----------------------

GammaResult gamma_membership(const Trajectory& traj, const SrGraph& sr,
                             const PathClassConfig& cfg) {
    if (cfg.M < 1) throw std::invalid_argument("gamma: M >= 1 required");
    GammaResult res;
    res.t_sr = detect_deviation(traj, sr, cfg.R);
    res.t_nb = detect_backtrack(traj, cfg.L);
    const long long W = cfg.W_ticks > 0 ? cfg.W_ticks : 40LL * cfg.M;
    const RegenScan scan = regeneration_edges(traj, cfg.L, W);

    if (res.t_sr >= 0) res.reasons |= GAMMA_DEVIATE;
    if (res.t_nb >= 0) res.reasons |= GAMMA_BACKTRACK;
    const long long t_end = (long long)traj.states.size() - 1;
    long long prev = 0;
    long long worst = 0;
    for (const RegenEvent& ev : scan.regen) {
        worst = std::max(worst, ev.tick - prev);
        prev = ev.tick;
    }
    worst = std::max(worst, t_end - prev);
    res.worst_gap_ticks = worst;
    if (worst > 2LL * cfg.M) res.reasons |= GAMMA_REGEN_GAP;
    res.in_gamma = res.reasons == GAMMA_OK;
    return res;
}

// ---------------------- quasi-tree-likeness ----------------------

namespace {

constexpr long long kBoundCap = 1LL << 62;

long long cap_mul(long long a, long long b) {
    if (b <= 0) return 0;
    if (a > kBoundCap / b) return kBoundCap;
    return a * b;
}

long long cap_add(long long a, long long b) {
    return a > kBoundCap - b ? kBoundCap : a + b;
}

struct Patch {
    int parent_patch = -1;
    int entry = -1; // state whose matching edge leads back to the parent patch
};

} // namespace

long long ball_growth_bound(int Delta, int radius) {
    if (radius < 0) throw std::invalid_argument("ball bound: radius >= 0 required");
    if (Delta <= 1) return radius + 1;
    long long total = 1;
    long long pw = 1;
    for (int i = 1; i <= radius; ++i) {
        pw = cap_mul(pw, Delta);
        total = cap_add(total, pw);
    }
    return total;
}

long long lr_ball_growth_bound(int Delta, int R, int L) {
    if (R < 0 || L < 0) throw std::invalid_argument("lr ball bound: R, L >= 0 required");
    long long D = 1;
    for (int i = 0; i < R; ++i) D = cap_mul(D, std::max(Delta, 2));
    long long total = 0;
    long long pw = 1;
    for (int i = 0; i <= L; ++i) {
        total = cap_add(total, pw);
        pw = cap_mul(pw, D);
    }
    return cap_mul(D, total);
}

static BallReport scp_ball_check(const MixtureSpec& spec, const Environment& env,
                                 int x, int radius) {
    const SrGraph sr = sr_graph(spec);
    BallReport rep;
    rep.bound = ball_growth_bound(spec.Delta, radius);
    const long long budget = cap_add(cap_mul(rep.bound, 4), 64);

    std::vector<Patch> patches{Patch{}}; // root patch: every matching edge goes up
    struct Node {
        int patch;
        int state;
        int depth;
    };
    auto key = [](int patch, int state) {
        return ((long long)patch << 32) | (unsigned)state;
    };
    std::unordered_set<long long> visited;
    std::unordered_map<long long, int> child_of;
    std::unordered_map<int, int> patch_of_state;
    std::deque<Node> q;

    visited.insert(key(0, x));
    patch_of_state.emplace(x, 0);
    q.push_back(Node{0, x, 0});
    long long nodes = 1;

    while (!q.empty()) {
        const Node nd = q.front();
        q.pop_front();
        if (nd.depth == radius) continue;

        std::vector<std::pair<int, int>> targets; // (patch, state)
        for (int y : sr.out[size_t(nd.state)])
            if (y != nd.state) targets.emplace_back(nd.patch, y);
        const int ey = env.eta[size_t(nd.state)];
        if (patches[size_t(nd.patch)].entry == nd.state) {
            targets.emplace_back(patches[size_t(nd.patch)].parent_patch, ey);
        } else {
            auto itc = child_of.find(key(nd.patch, nd.state));
            int cp;
            if (itc != child_of.end()) {
                cp = itc->second;
            } else {
                cp = (int)patches.size();
                patches.push_back(Patch{nd.patch, ey});
                child_of.emplace(key(nd.patch, nd.state), cp);
            }
            targets.emplace_back(cp, ey);
        }

        for (auto [tp, ts] : targets) {
            if (!visited.insert(key(tp, ts)).second) continue;
            auto ins = patch_of_state.emplace(ts, tp);
            if (!ins.second && ins.first->second != tp) {
                // same state reached in two covering copies: long-range cycle
                rep.quasi_tree_like = false;
                rep.ball_size = (long long)patch_of_state.size();
                return rep;
            }
            if (++nodes > budget)
                throw BallBudget("ball exploration exceeded growth budget");
            q.push_back(Node{tp, ts, nd.depth + 1});
        }
    }
    rep.ball_size = (long long)patch_of_state.size();
    return rep;
}

static BallReport lr_ball_check(const MixtureSpec& spec, const Environment& env,
                                int x, int radius, int R_sr) {
    if (R_sr < 1) throw std::invalid_argument("lr ball: R_sr >= 1 required");
    const SrGraph sr = sr_graph(spec);
    BallReport rep;
    rep.bound = lr_ball_growth_bound(spec.Delta, R_sr, radius);
    const long long budget = cap_add(cap_mul(rep.bound, 4), 64);

    std::unordered_set<int> explored;
    std::unordered_set<int> matched;
    std::deque<std::pair<int, int>> q; // (vertex to match, patch depth)

    auto reveal = [&](int center, int depth) -> bool {
        const auto dist = sr_distances(sr, center, R_sr);
        for (const auto& kv : dist)
            if (explored.count(kv.first)) return false;
        for (const auto& kv : dist) {
            explored.insert(kv.first);
            if (depth < radius) q.emplace_back(kv.first, depth);
        }
        if ((long long)explored.size() > budget)
            throw BallBudget("long-range ball exceeded growth budget");
        return true;
    };

    bool ok = reveal(x, 0);
    while (ok && !q.empty()) {
        const auto [v, d] = q.front();
        q.pop_front();
        if (matched.count(v)) continue;
        const int y = env.eta[size_t(v)];
        matched.insert(v);
        matched.insert(y);
        if (explored.count(y)) {
            ok = false;
            break;
        }
        ok = reveal(y, d + 1);
    }
    rep.quasi_tree_like = ok;
    rep.ball_size = (long long)explored.size();
    return rep;
}

BallReport check_quasi_tree_like(const MixtureSpec& spec, const Environment& env,
                                 int x, int radius, BallMode mode, int R_sr) {
    if (x < 0 || x >= 2 * spec.n)
        throw std::invalid_argument("ball: x out of range");
    if (radius < 0) throw std::invalid_argument("ball: radius >= 0 required");
    return mode == BallMode::ScP ? scp_ball_check(spec, env, x, radius)
                                 : lr_ball_check(spec, env, x, radius, R_sr);
}

} // namespace permix
