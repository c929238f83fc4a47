#pragma once
// Kernel constructions around the two-lift: the half-step matching move, the
// block move, their composition scP, the projection back to [n], the direct
// mixture kernel, and the tick-level sampler. A boost::rational mirror keeps
// the composition identity exact on small instances.

#include <boost/rational.hpp>

#include "permix/model.hpp"

namespace permix {

// p(x, eta(x)) for a lifted state x: probability of staying put on the
// matching half-step. Defined so that p(x,eta(x)) + p(eta(x),x) = 1.
double stay_prob(const MixtureSpec& spec, const Environment& env, int x);

// H1: half step. Row x: stay with p(x,eta(x)), jump to eta(x) otherwise.
StochasticMatrix half_step_matrix(const MixtureSpec& spec, const Environment& env);

// H2: blockdiag(P1, P2) on 2n states.
StochasticMatrix block_kernel(const MixtureSpec& spec);

// scP = H1 * H2, built directly from the two-case formula.
StochasticMatrix build_lifted_kernel(const MixtureSpec& spec, const Environment& env);

// barP(x,y) = scP(x,y) + scP(x, eta(y)) on V1 representatives.
StochasticMatrix project_kernel(const StochasticMatrix& lifted, const Environment& env);

// The mixture kernel on [n] built from its own formula (no lift):
// p(x,sigma x) P1(x,y) + (1 - p(x,sigma x)) P2(sigma x, sigma y).
StochasticMatrix mixture_kernel(const MixtureSpec& spec, const Environment& env);

// Project a lifted distribution: mu_bar(x) = mu(x) + mu(eta(x)), x in V1.
std::vector<double> project_distribution(const std::vector<double>& mu,
                                         const Environment& env);

// One tick of the lifted walk. Even tick: matching half-step. Odd tick:
// P row of the current block. Two ticks = one scP step.
int step(int state, long long tick, const MixtureSpec& spec, const Environment& env,
         Rng& rng);

// ---------------------- exact rational mirror ----------------------
using Rat = boost::rational<long long>;
using RatMatrix = std::vector<std::vector<Rat>>; // dense, small n only

struct RatSpec {
    int n = 0;
    RatMatrix P1;
    RatMatrix P2;
    Rat p_const{1, 2};
};

RatSpec make_demo_rat(int n);
RatMatrix rat_half_step(const RatSpec& spec, const Environment& env);
RatMatrix rat_block_kernel(const RatSpec& spec);
RatMatrix rat_lifted_kernel(const RatSpec& spec, const Environment& env);
RatMatrix rat_matmul(const RatMatrix& A, const RatMatrix& B);

} // namespace permix
