#include "bcb/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bcb {

bool ProblemInstance::unit_cost() const {
  for (const auto& row : c)
    for (const auto& x : row)
      if (x != Rat(1)) return false;
  return true;
}

Rat ProblemInstance::max_cost() const {
  Rat m = c[0][0];
  for (const auto& row : c)
    for (const auto& x : row) m = max(m, x);
  return m;
}

Rat ProblemInstance::min_cost(int j) const {
  Rat m = c[j - 1][0];
  for (const auto& x : c[j - 1]) m = min(m, x);
  return m;
}

void ProblemInstance::validate() const {
  if (J < 1 || K < 1) throw ConfigError("instance: J and K must be positive");
  if ((int)pi.size() != J || (int)pi_d.size() != J)
    throw ConfigError("instance: context_probs length != J");
  if ((int)u.size() != J || (int)c.size() != J)
    throw ConfigError("instance: reward/cost matrix has wrong row count");
  Rat sum(0);
  for (int j = 0; j < J; ++j) {
    if (pi[j] < Rat(0) || pi[j] > Rat(1))
      throw ConfigError("instance: context probability out of [0,1]");
    if (std::abs(pi[j].to_double() - pi_d[j]) > 1e-12)
      throw ConfigError("instance: pi double cache out of sync");
    sum += pi[j];
    if ((int)u[j].size() != K || (int)c[j].size() != K)
      throw ConfigError("instance: reward/cost matrix has wrong column count");
    for (int k = 0; k < K; ++k) {
      if (!(u[j][k] >= 0.0 && u[j][k] <= 1.0))
        throw ConfigError("instance: expected reward out of [0,1]");
      if (!(c[j][k] > Rat(0)))
        throw ConfigError("instance: costs must be strictly positive");
    }
  }
  if (sum != Rat(1)) {
    if (std::abs(sum.to_double() - 1.0) > 1e-12)
      throw ConfigError("instance: context probabilities must sum to 1, got " + sum.str());
    throw ConfigError("instance: context probabilities sum to 1 only approximately (" +
                      sum.str() + "); use exact decimals");
  }
}

ProblemInstance make_unit_instance(std::vector<Rat> pi,
                                   std::vector<std::vector<double>> u,
                                   RewardFamily family) {
  ProblemInstance inst;
  inst.J = (int)pi.size();
  inst.K = inst.J > 0 ? (int)u[0].size() : 0;
  inst.pi = std::move(pi);
  inst.pi_d.resize(inst.J);
  for (int j = 0; j < inst.J; ++j) inst.pi_d[j] = inst.pi[j].to_double();
  inst.u = std::move(u);
  inst.c.assign(inst.J, std::vector<Rat>(inst.K, Rat(1)));
  inst.family = family;
  inst.validate();
  return inst;
}

int sample_context(const ProblemInstance& inst, RngStream& rng) {
  double x = rng.next_double();
  double acc = 0.0;
  for (int j = 0; j < inst.J; ++j) {
    acc += inst.pi_d[j];
    if (x < acc) return j + 1;
  }
  return inst.J;  // guards the acc<1 float edge
}

double sample_reward(const ProblemInstance& inst, int j, int k, RngStream& rng) {
  if (j < 1 || j > inst.J || k < 1 || k > inst.K)
    throw ConfigError("sample_reward: context/action index out of range");
  double x = rng.next_double();
  double mean = inst.u[j - 1][k - 1];
  switch (inst.family) {
    case RewardFamily::Bernoulli:
      return x < mean ? 1.0 : 0.0;
    case RewardFamily::Deterministic:
      return mean;
  }
  return 0.0;
}

ActionOutcome apply_action(BudgetClock& clock, const ProblemInstance& inst,
                           int j, int k, RngStream& reward_rng) {
  if (clock.tau <= 0) throw ContractViolation("apply_action: no rounds remain");
  if (j < 1 || j > inst.J || k < 0 || k > inst.K)
    throw ContractViolation("apply_action: context/action index out of range");
  ActionOutcome out{0.0, Rat(0)};
  if (k == 0) {
    reward_rng.next_double();  // keep the reward stream aligned across policies
  } else {
    const Rat& cost = inst.c[j - 1][k - 1];
    if (cost > clock.b)
      throw ContractViolation("apply_action: action " + std::to_string(k) +
                              " under context " + std::to_string(j) +
                              " costs " + cost.str() + " > remaining budget " +
                              clock.b.str());
    out.reward = sample_reward(inst, j, k, reward_rng);
    out.cost = cost;
    clock.b -= cost;
  }
  clock.tau -= 1;
  return out;
}

GapTable build_gap_table(const ProblemInstance& inst) {
  GapTable g;
  g.J = inst.J;
  g.K = inst.K;
  g.ustar.resize(inst.J);
  g.kstar.resize(inst.J);
  for (int j = 0; j < inst.J; ++j) {
    int best = 0;
    for (int k = 1; k < inst.K; ++k)
      if (inst.u[j][k] > inst.u[j][best]) best = k;
    g.kstar[j] = best + 1;
    g.ustar[j] = inst.u[j][best];
  }
  g.order.resize(inst.J);
  std::iota(g.order.begin(), g.order.end(), 0);
  std::stable_sort(g.order.begin(), g.order.end(), [&](int a, int b) {
    if (g.ustar[a] != g.ustar[b]) return g.ustar[a] > g.ustar[b];
    return a < b;  // ties: original index ascending
  });
  g.rank_of.resize(inst.J);
  for (int r = 0; r < inst.J; ++r) g.rank_of[g.order[r]] = r;
  g.q.resize(inst.J + 1);
  g.q_d.resize(inst.J + 1);
  g.q[0] = Rat(0);
  g.q_d[0] = 0.0;
  g.ustar_ranked.resize(inst.J);
  g.pi_ranked.resize(inst.J);
  for (int r = 0; r < inst.J; ++r) {
    g.pi_ranked[r] = inst.pi[g.order[r]];
    g.ustar_ranked[r] = g.ustar[g.order[r]];
    g.q[r + 1] = g.q[r] + g.pi_ranked[r];
    g.q_d[r + 1] = g.q[r + 1].to_double();
  }
  return g;
}

}  // namespace bcb
