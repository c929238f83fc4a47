#pragma once
// Lazy random quasi-tree: a tree of small-range components joined by matched
// long-range edges. Components materialize on demand; every partner draw is a
// pure function of (seed, Ulam label), so a tree is reproducible from its seed
// no matter in which order vertices are queried.
//
// Representation: a vertex is (component id, tip state). Component 0 is the
// root component around iota(O). Each non-root component stores which vertex
// opened it; the vertex whose tip equals the component's center_tip is the
// center, and its long-range edge points back up to the parent. Every other
// vertex owns a long-range edge down to a fresh child component whose center
// type is drawn uniformly in the block opposite the tip.
//
// Ticks follow the same convention as the finite chain: even tick -> odd tick
// is the matching half step (stay or cross the long-range edge), odd -> even
// is the P row move inside the current component.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "permix/model.hpp"
#include "permix/rng.hpp"
#include "permix/stats.hpp"

namespace permix {

// ---------------------- vertices and components ----------------------

struct QtVertex {
    int comp = 0;
    int tip = 0;
};
inline bool operator==(QtVertex a, QtVertex b) {
    return a.comp == b.comp && a.tip == b.tip;
}
inline bool operator!=(QtVertex a, QtVertex b) { return !(a == b); }

struct QtComponent {
    int parent_comp = -1;    // -1 at the root
    int parent_tip = -1;     // tip of the vertex whose edge opened this one
    int center_tip = -1;     // entry type; the root stores iota(O) here
    int depth = 0;           // long-range edges from the root component
    uint64_t label_hash = 0; // Ulam label digest, drives the partner draw
};

// Explicit label for tests and dumps: the sequence of tips whose edges were
// crossed to reach the component, then the tip itself.
struct UlamLabel {
    std::vector<int> prefix;
    int tip = 0;
};

class LazyQuasiTree {
public:
    // root_type < 0 draws iota(O) uniformly from the seed. eta_root_type >= 0
    // pins the type of eta(O), which the conditioned laws fix.
    LazyQuasiTree(const MixtureSpec& spec, uint64_t seed, int root_type = -1,
                  int eta_root_type = -1);

    const MixtureSpec& spec() const { return *spec_; }
    uint64_t seed() const { return seed_; }
    int root_type() const { return comps_[0].center_tip; }
    QtVertex root() const { return {0, comps_[0].center_tip}; }

    int type(QtVertex x) const { return x.tip; }
    bool is_center(QtVertex x) const {
        return x.comp != 0 && x.tip == comps_[size_t(x.comp)].center_tip;
    }
    const QtComponent& component(int c) const { return comps_[size_t(c)]; }
    int depth(int c) const { return comps_[size_t(c)].depth; }
    long long materialized() const { return (long long)comps_.size(); }

    // Matched partner; opens the child component on first use and memoizes it.
    QtVertex eta(QtVertex x);

    // Probability of staying put on the matching half step at x.
    double stay_at(QtVertex x);

    // True when component c lies in the subtree rooted at component a.
    bool in_subtree(int a, int c) const;

    UlamLabel label_of(QtVertex x) const;

    // Override the uniform center draw (planted constructions). The hook must
    // return a state in the block opposite to the queried tip.
    void set_center_sampler(
        std::function<int(const MixtureSpec&, QtVertex, uint64_t)> f) {
        center_sampler_ = std::move(f);
    }

private:
    int open_child(QtVertex from);

    const MixtureSpec* spec_;
    uint64_t seed_;
    int eta_root_type_;
    std::vector<QtComponent> comps_;
    std::unordered_map<uint64_t, int> child_of_; // comp<<32|tip -> child comp
    std::function<int(const MixtureSpec&, QtVertex, uint64_t)> center_sampler_;
};

// Alternation legality of an explicit label: consecutive prefix entries and
// the tip each live in the block opposite their predecessor.
bool label_well_formed(const MixtureSpec& spec, const UlamLabel& label);

// ---------------------- the walker ----------------------

struct QtWalkerState {
    QtVertex v;
    long long tick = 0;
};

// Advance one tick (half step on even ticks, P row move on odd ticks).
QtWalkerState qt_step(LazyQuasiTree& tree, QtWalkerState w, Rng& rng);

struct QtCrossing {
    long long tick = 0; // arrival tick, always odd
    int from_comp = 0;
    int to_comp = 0;
    int from_tip = 0;
    int to_tip = 0;
    bool down = false; // toward larger depth
};

struct QtTrajectory {
    std::vector<QtVertex> states; // one entry per tick, states[0] = start
    std::vector<QtCrossing> lr;
};

QtTrajectory simulate_qt(LazyQuasiTree& tree, QtVertex start,
                         long long n_steps, Rng& rng, long long start_tick = 0);

// ---------------------- escape probability ----------------------

struct EscapeEstimate {
    double q_hat = 0.0;
    BinomialCI ci;           // Wilson, z = 3
    long long trials = 0;
    long long horizon = 0;   // steps
    bool center = false;
};

// Monte Carlo estimate of the probability that the walk enters the subtree
// hanging below x's long-range edge and stays there for H steps. This is an
// upper bound on the infinite-horizon escape probability, decreasing in H.
// Trials are seeded individually, so two calls with the same seed and
// different horizons are coupled sample by sample. For a center both starting
// clocks of the definition are estimated and the smaller one returned.
EscapeEstimate estimate_escape_probability(LazyQuasiTree& tree, QtVertex x,
                                           long long H_steps, long long trials,
                                           uint64_t seed);

// ---------------------- coupling with the finite chain ----------------------

struct CoupledRun {
    std::vector<int> finite_states; // finite chain, one entry per tick
    QtTrajectory quasi;             // mirrored tree walk, truncated at t_coup
    long long t_coup = -1;          // first step whose reveal closed a cycle
    bool censored = false;          // no cycle found within the horizon
    bool iota_agreed = false;       // contract: types match while coupled
    long long revealed = 0;         // matched pairs drawn during exploration
    long long explored = 0;         // vertices touched by the exploration
};

// Runs the finite chain in env while progressively revealing the matching
// around the trajectory (long-range radius L, small-range radius R) and
// mirrors it as a quasi-tree walk. The mirror is exact until the first reveal
// whose small-range ball touches already explored vertices, which is when a
// long-range cycle appears around the trajectory.
CoupledRun coupled_generation(const MixtureSpec& spec, const Environment& env,
                              int x0, int R, int L, long long t_max_steps,
                              uint64_t seed);

// ---------------------- regeneration records ----------------------

struct RegenerationRecord {
    long long k = 0;
    int y = 0;             // type of the vertex the edge was crossed from
    long long tick = 0;    // arrival tick; the walk's time is tick/2 steps
    long long depth = 0;   // long-range distance from the root after crossing
    bool in_tail = false;  // confirmation window sticks out past the run end
};

struct RegenRun {
    std::vector<RegenerationRecord> records;
    QtTrajectory traj;
    bool none_found = false;
    long long t_max_steps = 0;
};

// Detects long-range edges crossed exactly once during the run (the tree
// structure makes that the same as "crossed for the first and last time").
// L_horizon > 0 additionally requires the walk to reach long-range depth
// L_horizon below the edge before the run ends, which immunizes the record
// against end-of-run censoring. W_ticks > 0 flags records whose window
// [tick, tick + W_ticks] is cut off by the end of the run.
RegenRun run_regenerations(LazyQuasiTree& tree, long long t_max_steps,
                           int L_horizon, long long W_ticks, Rng& rng);

// ---------------------- renewal statistics ----------------------

struct RenewalReport {
    long long records_used = 0;
    long long runs = 0;
    double mean_t_inc = 0.0; // mean T increment in steps, records k >= 2
    double mean_l_inc = 0.0;
    // pooled N_t / t at the end of the runs times mean_t_inc; 1 when the
    // elementary renewal limit is exact
    double rate_product = 0.0;
    std::vector<double> var_ratio; // Var(T_k) / (k Var(T_1)) over runs
    double max_var_ratio = 0.0;
    // survival fits: P(T_inc > m) ~ exp(-c m^alpha), P(L_inc > m) ~ exp(-c m)
    double t_tail_alpha = 0.0;
    double t_tail_r2 = 0.0;
    double l_tail_rate = 0.0;
    double l_tail_r2 = 0.0;
    // empirical law of Y over records k >= 2, scaled by n: max/min over
    // states with at least min_hits visits
    double nu_ratio = 0.0;
    long long nu_support = 0;
    // same diagnostic for the best-sampled kernel row Q(u, .)
    double q_row_ratio = 0.0;
    long long q_row_support = 0;
};

RenewalReport renewal_statistics(const std::vector<RegenRun>& runs,
                                 const MixtureSpec& spec, int min_hits = 30);

// ---------------------- drift and entropy ----------------------

struct DriftEntropyEstimate {
    double d_hat = 0.0;
    double d_lo = 0.0, d_hi = 0.0;
    double h_prime_hat = 0.0;
    double h_prime_lo = 0.0, h_prime_hi = 0.0;
    double h_hat = 0.0;
    double h_lo = 0.0, h_hi = 0.0;
    double mean_t_inc = 0.0; // steps
    long long runs_used = 0;
    long long runs_discarded = 0; // zero-hit factor or no regenerations
    long long records = 0;
    long long n_inner = 0;
    long long h_inner = 0;
};

// d_hat pools final depth over final time across runs. h_prime_hat pools
// -log of the per-regeneration factors, each estimated by relaunching
// n_inner fresh walkers from the previous regeneration point (conditioned to
// stay below it, by rejection) and counting how many end up below the next
// regeneration edge after h_inner steps. h_hat = h_prime_hat / mean_t_inc.
DriftEntropyEstimate estimate_drift_entropy(
    const std::function<LazyQuasiTree(uint64_t)>& tree_sampler, long long runs,
    long long t_max_steps, long long n_inner, long long h_inner_steps,
    uint64_t seed, int workers = 0);

} // namespace permix
