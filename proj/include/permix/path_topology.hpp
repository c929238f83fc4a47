#pragma once
// Path structure on the lifted graph: loop-erased long-range traces,
// backtracking / deviation / regeneration detection, and quasi-tree-likeness
// of neighbourhoods.
//
// Conventions:
//  - ticks count half-steps. The state at tick k is the chain at time k/2.
//    Even -> odd transitions are matching moves (stay or jump to eta(x)),
//    odd -> even transitions are P moves inside the current block.
//  - a long-range crossing is a tick whose state changed to eta(previous);
//    it is recorded with the arrival tick and the oriented edge (from, to).
//  - R counts small-range hops, L long-range hops. Window parameters given
//    in integer time steps are converted to 2x ticks internally.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "permix/model.hpp"
#include "permix/rng.hpp"

namespace permix {

// ---------------------- long-range edges and trajectories ----------------------

struct LrEdge {
    int from = -1;
    int to = -1;
};

inline bool operator==(LrEdge a, LrEdge b) { return a.from == b.from && a.to == b.to; }
inline bool operator!=(LrEdge a, LrEdge b) { return !(a == b); }
inline LrEdge reversed(LrEdge e) { return LrEdge{e.to, e.from}; }

struct LrCrossing {
    long long tick = 0; // arrival tick (odd)
    LrEdge edge;
};

struct Trajectory {
    std::vector<int> states;    // states[k] = state at tick k
    std::vector<LrCrossing> lr; // increasing arrival ticks
};

// Run n_steps full steps (2*n_steps ticks) of the lifted walk from start.
Trajectory simulate_trajectory(const MixtureSpec& spec, const Environment& env,
                               int start, long long n_steps, Rng& rng);

// Check the tick invariants: matching moves on even ticks, P support on odd
// ticks, crossings listed exactly where the state jumped to eta. Throws.
void validate_trajectory(const Trajectory& traj, const MixtureSpec& spec,
                         const Environment& env);

// One line per tick: "tick,state,lr" with 1-based states.
void write_trajectory(std::ostream& os, const Trajectory& traj);

// ---------------------- loop erasure ----------------------

struct LoopErasedTrace {
    std::vector<LrEdge> xi;
};

// Erase backtracking pairs (e, reversed(e)) until none remain. Stack pass;
// the rewriting is confluent so the result does not depend on erasure order.
LoopErasedTrace loop_erase(const std::vector<LrEdge>& lr_path);
LoopErasedTrace loop_erase(const Trajectory& traj);

// ---------------------- backtracking ----------------------

// 0-based index of the crossing that completes the first length-L backtrack
// (L distinct edges immediately followed by their reversal), or -1. The
// distinctness check reads the definition literally on the forward window.
int backtrack_position(const std::vector<LrEdge>& lr_path, int L);

// Same scan on a trajectory; returns the arrival tick, or -1.
long long detect_backtrack(const Trajectory& traj, int L);

// ---------------------- small-range graph and deviation ----------------------

// Directed support graph of blockdiag(P1, P2) on 2n lifted states.
struct SrGraph {
    int n2 = 0; // 2n
    std::vector<std::vector<int>> out;
};

SrGraph sr_graph(const MixtureSpec& spec);

// Forward BFS distances from src, capped at depth cap (inclusive).
std::unordered_map<int, int> sr_distances(const SrGraph& sr, int src, int cap);

// First tick with d_SR(center, X_tick) >= R, or -1. The center is the last
// long-range arrival point (the start before any crossing).
long long detect_deviation(const Trajectory& traj, const SrGraph& sr, int R);

// ---------------------- regeneration edges ----------------------

// First crossing of an undirected matching edge, classified by scanning the
// W_ticks ticks after arrival: the edge qualifies if the walk covers
// long-range distance L, or the trajectory ends, before revisiting the
// first-visited endpoint. A revisit tick never counts as completing the
// distance. Events with no resolution inside the window are assumed to
// qualify (no return seen); this over-counts and is flagged. Events whose
// window sticks out past the end of the trajectory are marked in_tail and
// dropped from interval statistics by callers.
struct RegenEvent {
    long long tick = 0; // arrival tick of the first crossing
    LrEdge edge;        // oriented as first crossed
    bool resolved = true;
    bool assumed = false; // qualified only because no return was seen in the window
    bool in_tail = false;
};

struct RegenScan {
    std::vector<RegenEvent> regen; // qualifying edges, by first-crossing tick
    int first_crossings = 0;       // distinct matching edges crossed
    int unresolved_assumed = 0;
    int in_tail_count = 0;
    bool window_warning = false; // W_ticks < 4L cannot even resolve distance L
};

RegenScan regeneration_edges(const Trajectory& traj, int L, long long W_ticks);

// ---------------------- path class Gamma(R, L, M) ----------------------

struct PathClassConfig {
    int R = 1;             // deviation radius, small-range hops
    int L = 1;             // backtrack / regeneration horizon, long-range hops
    int M = 1;             // max regeneration gap, integer time steps
    long long W_ticks = 0; // regeneration lookahead; 0 means 40 * M ticks
};

enum GammaReason : unsigned {
    GAMMA_OK = 0,
    GAMMA_DEVIATE = 1u,
    GAMMA_BACKTRACK = 2u,
    GAMMA_REGEN_GAP = 4u,
};

struct GammaResult {
    bool in_gamma = true;
    unsigned reasons = GAMMA_OK;
    long long t_sr = -1;
    long long t_nb = -1;
    long long worst_gap_ticks = 0; // largest tick gap between regeneration marks
};

// A path belongs to the class when it never deviates past R, never
// backtracks over distance L, and every 2M-tick window contains the first
// crossing of a regeneration edge.
GammaResult gamma_membership(const Trajectory& traj, const SrGraph& sr,
                             const PathClassConfig& cfg);

// ---------------------- quasi-tree-likeness ----------------------

struct BallBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BallMode {
    ScP,       // ball of the full walk graph, radius in moves
    LongRange, // long-range ball, radius in matching hops with patch radius R
};

struct BallReport {
    bool quasi_tree_like = true;
    long long ball_size = 0; // distinct lifted states explored
    long long bound = 0;     // growth bound the size was checked against
};

// ScP mode unfolds the ball inside the covering quasi-tree and reports a
// long-range cycle as soon as two distinct covering vertices carry the same
// state. LongRange mode replays sequential generation without replacement
// (patches B_SR+(., R_sr), matching hops up to radius) and reports a cycle
// when a newly revealed patch intersects the explored set. Throws BallBudget
// when exploration exceeds the growth bound by more than 4x.
BallReport check_quasi_tree_like(const MixtureSpec& spec, const Environment& env,
                                 int x, int radius, BallMode mode, int R_sr = 0);

long long ball_growth_bound(int Delta, int radius);
long long lr_ball_growth_bound(int Delta, int R, int L);

} // namespace permix
