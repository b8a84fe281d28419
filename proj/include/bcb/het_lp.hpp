#pragma once

#include <vector>

#include "bcb/instance.hpp"
#include "bcb/rational.hpp"

namespace bcb {

// One step along a context's efficiency frontier: the marginal reward and
// marginal cost of upgrading from the previous candidate action to this one.
struct VirtualAction {
  int context = 0;      // 1-based
  int slot = 0;         // 0-based position in the context's candidate list
  int action = 0;       // original 1-based action id
  double du = 0.0;      // marginal expected reward
  Rat dc{0};            // marginal cost, strictly positive
  double eff = 0.0;     // du / dc
};

struct HetLpSolution {
  // Candidate actions per context, cost ascending, dominated actions removed.
  std::vector<std::vector<int>> candidates;
  // All virtual actions, sorted by marginal efficiency descending.
  std::vector<VirtualAction> order;
  // Cumulative expected spend after each entry of `order` (exact).
  std::vector<Rat> boundaries;
  int threshold = 0;    // virtual actions taken with probability 1
  Rat frac{0};          // probability of the next virtual action, 0 if none
  // Per (context, original action) probabilities; rows sum to at most 1.
  std::vector<std::vector<Rat>> p;
  double value = 0.0;   // expected single-round reward
  Rat spend{0};         // expected single-round cost
};

// Single-round allocation at average budget rate rho. When budget_cap is
// given, actions costing more than the cap are excluded per context before
// dominance pruning (they could not be paid for this round).
HetLpSolution het_lp_solve(const ProblemInstance& inst, const Rat& rho,
                           const Rat* budget_cap = nullptr);

// Candidate actions of one context: cost and reward strictly increasing,
// marginal efficiencies nonincreasing. 1-based action ids, cost ascending.
std::vector<int> find_candidate_set(const ProblemInstance& inst, int j,
                                    const Rat* budget_cap = nullptr);

double het_single_round_value(const ProblemInstance& inst, const Rat& rho);

// T * value(B/T) for arbitrary-cost instances.
double het_upper_bound(const ProblemInstance& inst, std::int64_t T, const Rat& B);

}  // namespace bcb
