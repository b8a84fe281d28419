#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcb/het_lp.hpp"
#include "bcb/instance.hpp"
#include "bcb/rng.hpp"
#include "bcb/unit_lp.hpp"

namespace bcb {

enum class PolicyKind {
  Alp,       // adaptive allocation at rate b/tau, statistics known
  Flp,       // fixed allocation at rate B/T, statistics known
  Pb,        // procrastinate for the better context (two contexts, unit cost)
  UcbAlp,    // adaptive allocation driven by reward confidence bounds
  UcbFlp,    // fixed-rate variant of the above
  UcbPb,     // confidence-bound procrastination (two contexts, unit cost)
  Ealp,      // adaptive allocation with estimated context distribution
  UcbEalp,   // both rewards and context distribution estimated
  Ealp2,     // context estimate frozen once it is provably accurate enough
  EpsFirst,  // explore uniformly, then exploit the estimated allocation
};

const char* policy_id(PolicyKind kind);
PolicyKind policy_from_id(const std::string& id);
bool policy_requires_unit_cost(PolicyKind kind);
bool policy_requires_two_contexts(PolicyKind kind);

enum class FreezeMode { KnownDelta, Adaptive };
enum class ExploreMode { Formula, Fixed, ConfidenceTest };

struct PolicyOptions {
  bool known_rewards = false;        // bypass learning, use true means
  bool known_context_probs = false;  // bypass estimation, use true probs
  // Ealp2
  FreezeMode freeze_mode = FreezeMode::Adaptive;
  double freeze_delta = 0.0;         // boundary margin for KnownDelta
  // EpsFirst
  ExploreMode explore_mode = ExploreMode::Formula;
  std::int64_t explore_rounds = 0;   // Fixed mode: explicit length
  double explore_margin = 0.5;       // the free parameter of Formula mode
};

// Mutable per-episode state. Statistics index contexts and actions 1-based
// at the call sites; storage is 0-based.
struct PolicyState {
  PolicyKind kind = PolicyKind::Alp;
  PolicyOptions opt;
  std::int64_t T = 0;
  Rat B{0};
  std::int64_t t = 0;  // rounds started

  std::vector<std::vector<std::int64_t>> pulls;
  std::vector<std::vector<double>> reward_sum;
  std::vector<std::int64_t> ctx_seen;

  bool pi_frozen = false;
  std::int64_t freeze_target = 0; // rounds prescribed before freezing
  std::int64_t freeze_round = 0;  // rounds of context data in use
  bool freeze_clamped = false;    // prescribed round count exceeded T
  std::vector<Rat> pi_frozen_val;

  std::int64_t explore_len = 0;   // exploration rounds in effect
  bool explore_over = false;      // confidence test passed
  bool last_explore = false;      // the round being decided explores
  std::int64_t forced_dummy = 0;  // affordability overrode the policy
  ProblemInstance est;            // estimate-backed copy for exploitation
  bool est_built = false;
};

PolicyState make_policy_state(PolicyKind kind, const PolicyOptions& opt,
                              const ProblemInstance& inst, std::int64_t T,
                              const Rat& B);

// One decision per round. Every call consumes exactly one draw from the
// policy stream so that decision sequences stay aligned across policies
// sharing seeds. Actions the remaining budget cannot pay for are never
// returned.
int policy_decide(PolicyState& st, const ProblemInstance& inst,
                  const GapTable& gap, const BudgetClock& clock, int j,
                  RngStream& policy_rng);

// Post-round statistics update; call with the realized reward when k > 0.
void policy_observe(PolicyState& st, const ProblemInstance& inst, int j,
                    int k, double reward);

// Confidence bound on the mean reward of (j, k) at round t; 1 when unseen.
double ucb_value(const PolicyState& st, int j, int k, std::int64_t t);

// Decision rules, exposed for direct drive in tests. All follow the
// one-draw contract above.
int alp_decide(PolicyState& st, const ProblemInstance& inst,
               const GapTable& gap, const BudgetClock& clock, int j,
               RngStream& rng, bool fixed_rate);
int pb_decide(const GapTable& gap, const BudgetClock& clock, int j,
              RngStream& rng);
int ucb_alp_decide(PolicyState& st, const ProblemInstance& inst,
                   const GapTable& gap, const BudgetClock& clock, int j,
                   RngStream& rng, bool fixed_rate, bool estimate_probs);
int ucb_pb_decide(PolicyState& st, const ProblemInstance& inst,
                  const GapTable& gap, const BudgetClock& clock, int j,
                  RngStream& rng);
int ealp_decide(PolicyState& st, const ProblemInstance& inst,
                const GapTable& gap, const BudgetClock& clock, int j,
                RngStream& rng);
int ealp2_decide(PolicyState& st, const ProblemInstance& inst,
                 const GapTable& gap, const BudgetClock& clock, int j,
                 RngStream& rng);
int eps_first_decide(PolicyState& st, const ProblemInstance& inst,
                     const BudgetClock& clock, int j, RngStream& rng);

// Context-distribution estimate from counts seen so far (exact fractions).
std::vector<Rat> pi_estimate(const PolicyState& st);

// Rounds of context observation prescribed before freezing the estimate,
// for a known boundary margin delta.
std::int64_t ealp2_freeze_rounds(int J, double log_T, double delta);

// Half of the lower confidence bound on the boundary margin implied by the
// current estimate; drives the adaptive freeze.
double delta_lcb(const std::vector<Rat>& pi_hat, const GapTable& gap,
                 const Rat& rho);

// Exploration length prescribed for the explore-then-exploit policy.
std::int64_t eps_length(int K, double margin, double pi_min, double dstar,
                        double log_T);
std::int64_t eps_length_for(const ProblemInstance& inst, double margin,
                            std::int64_t T);

// Smallest gap between costs of distinct action pairs (skip included).
double min_cost_gap(const ProblemInstance& inst);
// Smallest gap between distinct marginal-efficiency ratios.
double min_eff_gap(const ProblemInstance& inst);

// Confidence test for one comparison of two estimated efficiency ratios
// backed by (n1a, n1b) and (n2a, n2b) samples; true when both sides are
// separated sharply enough that a wrong order has probability below 1/T^2.
bool clt_test(double cost_gap, double eff1, std::int64_t n1a, std::int64_t n1b,
              double eff2, std::int64_t n2a, std::int64_t n2b, std::int64_t T);

}  // namespace bcb
