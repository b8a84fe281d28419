#include "bcb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bcb/errors.hpp"

namespace bcb {

namespace {

struct KindName {
  PolicyKind kind;
  const char* id;
};

const KindName kKindNames[] = {
    {PolicyKind::Alp, "alp"},         {PolicyKind::Flp, "flp"},
    {PolicyKind::Pb, "pb"},           {PolicyKind::UcbAlp, "ucb-alp"},
    {PolicyKind::UcbFlp, "ucb-flp"},  {PolicyKind::UcbPb, "ucb-pb"},
    {PolicyKind::Ealp, "ealp"},       {PolicyKind::UcbEalp, "ucb-ealp"},
    {PolicyKind::Ealp2, "ealp2"},     {PolicyKind::EpsFirst, "eps-first"},
};

// Service probability of 0-based context `ctx` under the ranked unit-cost
// allocation when contexts are ordered by `score` descending (ties keep the
// lower index first).
Rat unit_service_prob(const std::vector<Rat>& pi,
                      const std::vector<double>& score, const Rat& rho,
                      int ctx) {
  const int J = (int)pi.size();
  std::vector<int> order(J);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] > score[b]; });
  Rat q(0);
  for (int r = 0; r < J; ++r) {
    int c = order[r];
    Rat nq = q + pi[c];
    if (nq <= rho) {
      if (c == ctx) return Rat(1);
      q = nq;
      continue;
    }
    if (c != ctx) return Rat(0);  // ctx ranks at or past the cutoff
    Rat rest = rho - q;
    if (rest > Rat(0)) return div_approx_on_overflow(rest, pi[c]);
    return Rat(0);
  }
  return Rat(1);
}

// Same allocation along a fixed ranking, probabilities supplied separately.
Rat ranked_service_prob(const GapTable& gap, const std::vector<Rat>& pi,
                        const Rat& rho, int j0) {
  Rat q(0);
  for (int r = 0; r < gap.J; ++r) {
    int c = gap.order[r];
    Rat nq = q + pi[c];
    if (nq <= rho) {
      if (c == j0) return Rat(1);
      q = nq;
      continue;
    }
    if (c != j0) return Rat(0);
    Rat rest = rho - q;
    if (rest > Rat(0)) return div_approx_on_overflow(rest, pi[c]);
    return Rat(0);
  }
  return Rat(1);
}

// O(1) variant for the true distribution, using precomputed boundaries.
Rat gap_service_prob(const GapTable& gap, const Rat& rho, int j0) {
  int r = gap.rank_of[j0];
  if (gap.q[r + 1] <= rho) return Rat(1);
  if (gap.q[r] <= rho) {
    Rat rest = rho - gap.q[r];
    if (rest > Rat(0)) return div_approx_on_overflow(rest, gap.pi_ranked[r]);
  }
  return Rat(0);
}

// Per-context best action and its confidence-bound score; ties keep the
// lowest action index.
void best_actions(const PolicyState& st, const ProblemInstance& inst,
                  std::vector<double>& score, std::vector<int>& kbest) {
  score.resize(inst.J);
  kbest.resize(inst.J);
  for (int j = 1; j <= inst.J; ++j) {
    double best = -1.0;
    int bk = 1;
    for (int k = 1; k <= inst.K; ++k) {
      double v = st.opt.known_rewards ? inst.u[j - 1][k - 1]
                                      : ucb_value(st, j, k, st.t);
      if (v > best) {
        best = v;
        bk = k;
      }
    }
    score[j - 1] = best;
    kbest[j - 1] = bk;
  }
}

void build_estimate(PolicyState& st, const ProblemInstance& inst) {
  st.est = inst;
  if (!st.opt.known_rewards) {
    for (int j = 0; j < inst.J; ++j)
      for (int k = 0; k < inst.K; ++k) {
        std::int64_t n = st.pulls[j][k];
        st.est.u[j][k] = n > 0 ? st.reward_sum[j][k] / (double)n : 0.0;
      }
  }
  st.est_built = true;
}

// Walks the per-action probability row in action-id order; leftover mass
// falls to the skip action. Consumes the caller-supplied uniform.
int walk_row(const std::vector<Rat>& row, double draw) {
  double acc = 0.0;
  for (size_t k = 0; k < row.size(); ++k) {
    if (row[k] == Rat(0)) continue;
    acc += row[k].to_double();
    if (draw < acc) return (int)k + 1;
  }
  return 0;
}

void freeze_now(PolicyState& st) {
  st.pi_frozen = true;
  st.pi_frozen_val = pi_estimate(st);
  st.freeze_round = st.t;
}

void maybe_freeze(PolicyState& st, const GapTable& gap) {
  if (st.opt.freeze_mode == FreezeMode::KnownDelta) {
    if (st.t >= st.freeze_target) freeze_now(st);
    return;
  }
  double d = delta_lcb(pi_estimate(st), gap, st.B / Rat(st.T));
  if (d > 0.0) {
    double lt = std::log((double)st.T);
    bool confident = d * d * (double)st.t >= lt;  // wrong-threshold odds 1/T^2
    bool settled =
        (double)st.t >= 16.0 * st.pulls.size() * st.pulls.size() * lt * lt * lt /
                            (d * d);
    if (confident && settled) {
      freeze_now(st);
      return;
    }
  }
  if (st.t >= st.T) st.freeze_clamped = true;  // never confident enough
}

bool clt_exploration_done(const PolicyState& st, const ProblemInstance& inst) {
  // Unpulled actions have no efficiency estimate; they also drop out of the
  // estimated candidate sets, which would make the test below vacuous.
  for (const auto& row : st.pulls)
    for (auto n : row)
      if (n == 0) return false;
  ProblemInstance est = inst;
  if (!st.opt.known_rewards) {
    for (int j = 0; j < inst.J; ++j)
      for (int k = 0; k < inst.K; ++k) {
        std::int64_t n = st.pulls[j][k];
        est.u[j][k] = n > 0 ? st.reward_sum[j][k] / (double)n : 0.0;
      }
  }
  HetLpSolution sol = het_lp_solve(est, Rat(1));  // only the ordering matters
  double dc = min_cost_gap(inst);
  auto counts = [&](const VirtualAction& va) {
    std::int64_t na = st.pulls[va.context - 1][va.action - 1];
    std::int64_t nb = std::numeric_limits<std::int64_t>::max();  // skip action
    if (va.slot > 0) {
      int prev = sol.candidates[va.context - 1][va.slot - 1];
      nb = st.pulls[va.context - 1][prev - 1];
    }
    return std::pair<std::int64_t, std::int64_t>(na, nb);
  };
  std::vector<std::vector<const VirtualAction*>> per_ctx(inst.J);
  for (const auto& va : sol.order) per_ctx[va.context - 1].push_back(&va);
  for (auto& list : per_ctx)
    std::sort(list.begin(), list.end(),
              [](const VirtualAction* a, const VirtualAction* b) {
                return a->slot < b->slot;
              });
  for (const auto& list : per_ctx)
    for (size_t a = 0; a + 1 < list.size(); ++a) {
      auto c1 = counts(*list[a]);
      auto c2 = counts(*list[a + 1]);
      if (!clt_test(dc, list[a]->eff, c1.first, c1.second, list[a + 1]->eff,
                    c2.first, c2.second, st.T))
        return false;
    }
  for (size_t i = 0; i + 1 < sol.order.size(); ++i) {
    auto c1 = counts(sol.order[i]);
    auto c2 = counts(sol.order[i + 1]);
    if (!clt_test(dc, sol.order[i].eff, c1.first, c1.second,
                  sol.order[i + 1].eff, c2.first, c2.second, st.T))
      return false;
  }
  return true;
}

}  // namespace

const char* policy_id(PolicyKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.id;
  return "?";
}

PolicyKind policy_from_id(const std::string& id) {
  for (const auto& kn : kKindNames)
    if (id == kn.id) return kn.kind;
  throw ConfigError("unknown policy id: " + id);
}

bool policy_requires_unit_cost(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Alp:
    case PolicyKind::Flp:
    case PolicyKind::EpsFirst:
      return false;
    default:
      return true;
  }
}

bool policy_requires_two_contexts(PolicyKind kind) {
  return kind == PolicyKind::Pb || kind == PolicyKind::UcbPb;
}

PolicyState make_policy_state(PolicyKind kind, const PolicyOptions& opt,
                              const ProblemInstance& inst, std::int64_t T,
                              const Rat& B) {
  PolicyState st;
  st.kind = kind;
  st.opt = opt;
  st.T = T;
  st.B = B;
  st.pulls.assign(inst.J, std::vector<std::int64_t>(inst.K, 0));
  st.reward_sum.assign(inst.J, std::vector<double>(inst.K, 0.0));
  st.ctx_seen.assign(inst.J, 0);

  if (kind == PolicyKind::Ealp2 && opt.freeze_mode == FreezeMode::KnownDelta) {
    if (!(opt.freeze_delta > 0.0))
      throw ConfigError("ealp2: known-delta mode needs a positive delta");
    st.freeze_target =
        ealp2_freeze_rounds(inst.J, std::log((double)T), opt.freeze_delta);
    if (st.freeze_target > T) {
      st.freeze_target = T;
      st.freeze_clamped = true;
    }
  }
  if (kind == PolicyKind::EpsFirst) {
    switch (opt.explore_mode) {
      case ExploreMode::Fixed:
        st.explore_len = opt.explore_rounds;
        break;
      case ExploreMode::Formula:
        st.explore_len = eps_length_for(inst, opt.explore_margin, T);
        break;
      case ExploreMode::ConfidenceTest:
        break;  // data-driven stop
    }
    if (st.explore_len > T) {
      st.explore_len = T;
      st.freeze_clamped = true;
    }
  }
  return st;
}

double ucb_value(const PolicyState& st, int j, int k, std::int64_t t) {
  std::int64_t n = st.pulls[j - 1][k - 1];
  if (n <= 0) return 1.0;
  return st.reward_sum[j - 1][k - 1] / (double)n +
         std::sqrt(std::log((double)t) / (2.0 * (double)n));
}

int alp_decide(PolicyState& st, const ProblemInstance& inst,
               const GapTable& gap, const BudgetClock& clock, int j,
               RngStream& rng, bool fixed_rate) {
  Rat rho = fixed_rate ? st.B / Rat(st.T) : clock.b / Rat(clock.tau);
  if (inst.unit_cost()) {
    Rat p = clock.b >= Rat(1) ? gap_service_prob(gap, rho, j - 1) : Rat(0);
    return rng.next_double() < p.to_double() ? gap.kstar[j - 1] : 0;
  }
  HetLpSolution sol = het_lp_solve(inst, rho, &clock.b);
  return walk_row(sol.p[j - 1], rng.next_double());
}

int pb_decide(const GapTable& gap, const BudgetClock& clock, int j,
              RngStream& rng) {
  rng.next_double();  // keep the one-draw contract
  bool plenty = clock.b >= Rat(clock.tau);
  bool better = gap.rank_of[j - 1] == 0;
  if ((plenty || (clock.b > Rat(0) && better)) && clock.b >= Rat(1))
    return gap.kstar[j - 1];
  return 0;
}

int ucb_alp_decide(PolicyState& st, const ProblemInstance& inst,
                   const GapTable& gap, const BudgetClock& clock, int j,
                   RngStream& rng, bool fixed_rate, bool estimate_probs) {
  (void)gap;
  std::vector<double> score;
  std::vector<int> kbest;
  best_actions(st, inst, score, kbest);
  Rat rho = fixed_rate ? st.B / Rat(st.T) : clock.b / Rat(clock.tau);
  Rat p(0);
  if (clock.b >= Rat(1)) {
    if (estimate_probs)
      p = unit_service_prob(pi_estimate(st), score, rho, j - 1);
    else
      p = unit_service_prob(inst.pi, score, rho, j - 1);
  }
  return rng.next_double() < p.to_double() ? kbest[j - 1] : 0;
}

int ucb_pb_decide(PolicyState& st, const ProblemInstance& inst,
                  const GapTable& gap, const BudgetClock& clock, int j,
                  RngStream& rng) {
  (void)gap;
  std::vector<double> score;
  std::vector<int> kbest;
  best_actions(st, inst, score, kbest);
  int jstar = 0;
  for (int jj = 1; jj < inst.J; ++jj)
    if (score[jj] > score[jstar]) jstar = jj;
  rng.next_double();
  bool plenty = clock.b >= Rat(clock.tau);
  bool mine = (j - 1) == jstar;
  if ((plenty || (clock.b > Rat(0) && mine)) && clock.b >= Rat(1))
    return kbest[j - 1];
  return 0;
}

int ealp_decide(PolicyState& st, const ProblemInstance&,
                const GapTable& gap, const BudgetClock& clock, int j,
                RngStream& rng) {
  Rat rho = clock.b / Rat(clock.tau);
  Rat p(0);
  if (clock.b >= Rat(1)) {
    if (st.opt.known_context_probs)
      p = gap_service_prob(gap, rho, j - 1);
    else
      p = ranked_service_prob(gap, pi_estimate(st), rho, j - 1);
  }
  return rng.next_double() < p.to_double() ? gap.kstar[j - 1] : 0;
}

int ealp2_decide(PolicyState& st, const ProblemInstance&,
                 const GapTable& gap, const BudgetClock& clock, int j,
                 RngStream& rng) {
  Rat rho = clock.b / Rat(clock.tau);
  Rat p(0);
  if (clock.b >= Rat(1)) {
    if (st.opt.known_context_probs)
      p = gap_service_prob(gap, rho, j - 1);
    else if (st.pi_frozen)
      p = ranked_service_prob(gap, st.pi_frozen_val, rho, j - 1);
    else
      p = ranked_service_prob(gap, pi_estimate(st), rho, j - 1);
  }
  return rng.next_double() < p.to_double() ? gap.kstar[j - 1] : 0;
}

int eps_first_decide(PolicyState& st, const ProblemInstance& inst,
                     const BudgetClock& clock, int j, RngStream& rng) {
  bool exploring = st.opt.explore_mode == ExploreMode::ConfidenceTest
                       ? !st.explore_over
                       : st.t <= st.explore_len;
  st.last_explore = exploring;
  if (exploring && st.opt.explore_mode == ExploreMode::ConfidenceTest)
    st.explore_len = st.t;  // realized length, grows until the test passes
  if (exploring) {
    double draw = rng.next_double();
    if (!(clock.b > Rat(0))) return 0;
    std::int64_t mn = st.pulls[j - 1][0];
    for (int k = 1; k < inst.K; ++k) mn = std::min(mn, st.pulls[j - 1][k]);
    std::vector<int> ties;
    for (int k = 0; k < inst.K; ++k)
      if (st.pulls[j - 1][k] == mn) ties.push_back(k);
    size_t idx = std::min((size_t)(draw * ties.size()), ties.size() - 1);
    int pick = ties[idx];
    if (inst.c[j - 1][pick] <= clock.b) return pick + 1;
    st.forced_dummy += 1;  // cheapest-unpulled action is out of reach
    return 0;
  }
  if (!st.est_built) build_estimate(st, inst);
  double draw = rng.next_double();
  if (!(clock.b > Rat(0))) return 0;
  Rat rho = clock.b / Rat(clock.tau);
  HetLpSolution sol = het_lp_solve(st.est, rho, &clock.b);
  return walk_row(sol.p[j - 1], draw);
}

int policy_decide(PolicyState& st, const ProblemInstance& inst,
                  const GapTable& gap, const BudgetClock& clock, int j,
                  RngStream& rng) {
  st.t += 1;
  switch (st.kind) {
    case PolicyKind::Ealp:
    case PolicyKind::UcbEalp:
      if (!st.opt.known_context_probs) st.ctx_seen[j - 1] += 1;
      break;
    case PolicyKind::Ealp2:
      if (!st.opt.known_context_probs && !st.pi_frozen) {
        st.ctx_seen[j - 1] += 1;
        st.freeze_round = st.t;
        maybe_freeze(st, gap);
      }
      break;
    default:
      break;
  }
  switch (st.kind) {
    case PolicyKind::Alp:
      return alp_decide(st, inst, gap, clock, j, rng, false);
    case PolicyKind::Flp:
      return alp_decide(st, inst, gap, clock, j, rng, true);
    case PolicyKind::Pb:
      return pb_decide(gap, clock, j, rng);
    case PolicyKind::UcbAlp:
      return ucb_alp_decide(st, inst, gap, clock, j, rng, false, false);
    case PolicyKind::UcbFlp:
      return ucb_alp_decide(st, inst, gap, clock, j, rng, true, false);
    case PolicyKind::UcbEalp:
      return ucb_alp_decide(st, inst, gap, clock, j, rng, false,
                            !st.opt.known_context_probs);
    case PolicyKind::UcbPb:
      return ucb_pb_decide(st, inst, gap, clock, j, rng);
    case PolicyKind::Ealp:
      return ealp_decide(st, inst, gap, clock, j, rng);
    case PolicyKind::Ealp2:
      return ealp2_decide(st, inst, gap, clock, j, rng);
    case PolicyKind::EpsFirst:
      return eps_first_decide(st, inst, clock, j, rng);
  }
  throw ContractViolation("policy_decide: unhandled policy kind");
}

void policy_observe(PolicyState& st, const ProblemInstance& inst, int j, int k,
                    double reward) {
  switch (st.kind) {
    case PolicyKind::UcbAlp:
    case PolicyKind::UcbFlp:
    case PolicyKind::UcbPb:
    case PolicyKind::UcbEalp:
      if (k > 0) {
        st.pulls[j - 1][k - 1] += 1;
        st.reward_sum[j - 1][k - 1] += reward;
      }
      break;
    case PolicyKind::EpsFirst:
      if (st.last_explore) {
        if (k > 0) {
          st.pulls[j - 1][k - 1] += 1;
          st.reward_sum[j - 1][k - 1] += reward;
        }
        if (st.opt.explore_mode == ExploreMode::ConfidenceTest &&
            !st.explore_over)
          st.explore_over = clt_exploration_done(st, inst);
      }
      break;
    default:
      break;
  }
}

std::vector<Rat> pi_estimate(const PolicyState& st) {
  std::int64_t total = 0;
  for (auto n : st.ctx_seen) total += n;
  if (total <= 0)
    throw ContractViolation("pi_estimate: no context observations yet");
  std::vector<Rat> out(st.ctx_seen.size());
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = Rat::from_int128(st.ctx_seen[j], total);
  return out;
}

std::int64_t ealp2_freeze_rounds(int J, double log_T, double delta) {
  if (!(delta > 0.0)) throw ConfigError("freeze rounds need a positive delta");
  double lt = log_T;
  return (std::int64_t)std::ceil(16.0 * J * J * lt * lt * lt / (delta * delta));
}

double delta_lcb(const std::vector<Rat>& pi_hat, const GapTable& gap,
                 const Rat& rho) {
  Rat q(0);
  Rat below(0);  // boundary at or under rho
  Rat above(-1);
  for (int r = 0; r < gap.J; ++r) {
    Rat nq = q + pi_hat[gap.order[r]];
    if (nq <= rho) {
      q = nq;
      below = nq;
    } else {
      above = nq;
      break;
    }
  }
  double lo = (rho - below).to_double();
  double hi = above < Rat(0) ? std::numeric_limits<double>::infinity()
                             : (above - rho).to_double();
  double dhat = lo < hi ? lo : hi;
  return dhat / 2.0;
}

std::int64_t eps_length(int K, double margin, double pi_min, double dstar,
                        double log_T) {
  if (!(margin > 0.0 && margin < 1.0))
    throw ConfigError("exploration margin must lie in (0,1)");
  if (!(pi_min > 0.0) || !(dstar > 0.0))
    throw ConfigError("exploration length needs positive pi_min and gap");
  double head = K / ((1.0 - margin) * pi_min);
  double tail = log_T * std::max(1.0 / (margin * margin),
                                 16.0 * K /
                                     ((1.0 - margin) * pi_min * dstar * dstar));
  return (std::int64_t)std::ceil(head + tail);
}

std::int64_t eps_length_for(const ProblemInstance& inst, double margin,
                            std::int64_t T) {
  double pi_min = inst.pi_d[0];
  for (double p : inst.pi_d) pi_min = std::min(pi_min, p);
  double dstar = min_cost_gap(inst) * min_eff_gap(inst);
  return eps_length(inst.K, margin, pi_min, dstar, std::log((double)T));
}

double min_cost_gap(const ProblemInstance& inst) {
  Rat best(0);
  bool found = false;
  for (int j = 0; j < inst.J; ++j) {
    std::vector<Rat> cs;
    cs.push_back(Rat(0));  // the skip action is free
    for (int k = 0; k < inst.K; ++k) cs.push_back(inst.c[j][k]);
    for (size_t a = 0; a < cs.size(); ++a)
      for (size_t b = a + 1; b < cs.size(); ++b) {
        Rat d = cs[a] < cs[b] ? cs[b] - cs[a] : cs[a] - cs[b];
        // Equal-cost duplicates resolve by direct reward comparison and do
        // not constrain the separation.
        if (d > Rat(0) && (!found || d < best)) {
          best = d;
          found = true;
        }
      }
  }
  if (!found) throw ConfigError("min_cost_gap: no distinct costs");
  return best.to_double();
}

double min_eff_gap(const ProblemInstance& inst) {
  std::vector<double> xs;
  for (int j = 0; j < inst.J; ++j) {
    std::vector<double> u{0.0};
    std::vector<Rat> c{Rat(0)};
    for (int k = 0; k < inst.K; ++k) {
      u.push_back(inst.u[j][k]);
      c.push_back(inst.c[j][k]);
    }
    for (size_t a = 0; a < u.size(); ++a)
      for (size_t b = a + 1; b < u.size(); ++b) {
        if (c[a] == c[b]) continue;
        xs.push_back((u[a] - u[b]) / (c[a] - c[b]).to_double());
      }
  }
  double best = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < xs.size(); ++a)
    for (size_t b = a + 1; b < xs.size(); ++b)
      best = std::min(best, std::abs(xs[a] - xs[b]));
  if (!(best > 0.0))
    throw ConfigError(
        "min_eff_gap: efficiency ratios tie, prescribed exploration length "
        "is undefined (use a fixed length or the confidence test)");
  return best;
}

bool clt_test(double cost_gap, double eff1, std::int64_t n1a, std::int64_t n1b,
              double eff2, std::int64_t n2a, std::int64_t n2b,
              std::int64_t T) {
  double dp = cost_gap * (eff1 - eff2) / 2.0;
  double d2 = 2.0 * dp * dp;
  double need = 2.0 * std::log((double)T);
  auto side = [&](std::int64_t a, std::int64_t b) {
    std::int64_t n = a < b ? a : b;
    return d2 * (double)n >= need;
  };
  return side(n1a, n1b) && side(n2a, n2b);
}

}  // namespace bcb
