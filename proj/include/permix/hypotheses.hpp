#pragma once
// Structural hypothesis checks on a spec: entry floors, column-sum bounds,
// per-chain reachable-set sizes, and the return-loop sets S(l) whose near-full
// coverage is what the short-backtracking hypothesis asks for.

#include <vector>

#include "permix/model.hpp"

namespace permix {

struct HypothesisReport {
    // H1: non-zero entries bounded below, column sums bounded above.
    double entry_floor = 0.0;   // min positive entry of P1, P2
    double max_col_sum_1 = 0.0; // max_y sum_x P1(x,y)
    double max_col_sum_2 = 0.0;
    // H2: choice probabilities bounded away from {0,1}.
    double p_floor = 0.0; // min over x of min(p, 1-p)
    // H3: forward-reachable set sizes (capped at reach_cap for reporting).
    static constexpr int reach_cap = 16;
    std::vector<int> reach_1; // per V1 state under P1
    std::vector<int> reach_2; // per state under P2
    // H4: S(l) = {x : P(x,y) > 0 implies some P^s(y,x) > 0 with s <= l},
    // computed block-wise on blockdiag(P1,P2); sizes indexed by l = 1..l_max.
    std::vector<long long> s_l_size;
    std::vector<double> s_l_fraction; // of 2n

    int delta_computed = 0; // degree bound from the SR support (+1 LR edge)

    bool h1 = false, h2 = false, h3 = false, h4 = false;
    bool all() const { return h1 && h2 && h3 && h4; }
};

// h4 passes when some l <= l_max covers at least h4_min_fraction of 2n.
HypothesisReport validate_hypotheses(const MixtureSpec& spec, int l_max,
                                     double h4_min_fraction = 0.9);

} // namespace permix
