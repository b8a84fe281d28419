#pragma once

#include <cstdint>
#include <vector>

#include "bcb/errors.hpp"
#include "bcb/rational.hpp"
#include "bcb/rng.hpp"

namespace bcb {

enum class RewardFamily { Bernoulli, Deterministic };

// J contexts arriving i.i.d. with probabilities pi, K actions per context,
// expected rewards u in [0,1], strictly positive costs. Action 0 is the dummy
// (skip): zero reward, zero cost, always allowed.
struct ProblemInstance {
  int J = 0;
  int K = 0;
  std::vector<Rat> pi;                  // exact context probabilities
  std::vector<double> pi_d;             // cached doubles for sampling
  std::vector<std::vector<double>> u;   // J x K expected rewards
  std::vector<std::vector<Rat>> c;      // J x K costs, exact
  RewardFamily family = RewardFamily::Bernoulli;

  bool unit_cost() const;
  Rat max_cost() const;
  Rat min_cost(int j) const;
  void validate() const;  // throws ConfigError
};

ProblemInstance make_unit_instance(std::vector<Rat> pi,
                                   std::vector<std::vector<double>> u,
                                   RewardFamily family);

// Remaining time/budget bookkeeping for one episode. b only ever decreases by
// the exact cost of a taken action; tau decreases by exactly 1 per round.
struct BudgetClock {
  std::int64_t T = 0;
  Rat B;
  std::int64_t tau = 0;  // remaining rounds including the current one
  Rat b;                 // remaining budget

  static BudgetClock start(std::int64_t T, Rat B) {
    BudgetClock c;
    c.T = T;
    c.B = B;
    c.tau = T;
    c.b = B;
    return c;
  }
  Rat rho() const { return B / Rat(T); }
};

struct TraceRow {
  std::int64_t t;   // 1-based round
  int context;      // 1-based
  int action;       // 0 = dummy
  double reward;
  Rat cost;
  Rat b_after;      // remaining budget once the round settled
};

struct EpisodeTrace {
  std::int64_t T = 0;
  Rat B;
  std::vector<TraceRow> rows;
  double total_reward = 0.0;

  // b_tau = budget available when tau rounds remain (b_T = B).
  Rat budget_at(std::int64_t tau) const {
    if (tau >= T) return B;
    return rows[static_cast<std::size_t>(T - tau) - 1].b_after;
  }
};

// Contexts re-ranked by best expected reward descending (ties: original index
// ascending), cumulative boundaries over that ranking, and reward gaps.
struct GapTable {
  int J = 0;
  int K = 0;
  std::vector<int> order;      // order[r] = context at rank r (0-based both)
  std::vector<int> rank_of;    // inverse permutation
  std::vector<double> ustar;   // per context (original index)
  std::vector<int> kstar;      // best action per context, lowest index on ties
  std::vector<Rat> q;          // q[r] = sum of pi over ranks 1..r; q[0] = 0
  std::vector<double> q_d;

  // gap(j, jp, k) = ustar[jp] - u[j][k], all original indices
  double ustar_rank(int r) const { return ustar_ranked[r]; }
  std::vector<double> ustar_ranked;  // ustar in rank order
  std::vector<Rat> pi_ranked;
};

// --- operations ---

// returns 1-based context index with probability pi_j, one uniform consumed
int sample_context(const ProblemInstance& inst, RngStream& rng);

// expectation u_{j,k}; Bernoulli returns {0,1}; one uniform always consumed
double sample_reward(const ProblemInstance& inst, int j, int k, RngStream& rng);

struct ActionOutcome {
  double reward;
  Rat cost;
};

// Applies action k (0 = dummy) for context j: checks affordability, samples
// the reward, charges the cost, advances the clock. Consumes exactly one
// reward uniform per call regardless of the action, so reward streams stay
// aligned across policies that act differently.
ActionOutcome apply_action(BudgetClock& clock, const ProblemInstance& inst,
                           int j, int k, RngStream& reward_rng);

GapTable build_gap_table(const ProblemInstance& inst);

}  // namespace bcb
