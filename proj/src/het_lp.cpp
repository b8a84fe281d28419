#include "bcb/het_lp.hpp"

#include <algorithm>
#include <stdexcept>

#include "bcb/errors.hpp"

namespace bcb {

namespace {

// Efficiency order: u/c descending; ties resolved toward lower reward first
// so the dominance pass can drop the duplicate, then by action id.
bool eff_less(double u1, const Rat& c1, double u2, const Rat& c2) {
  long double lhs = (long double)u1 * (long double)c2.to_double();
  long double rhs = (long double)u2 * (long double)c1.to_double();
  return lhs < rhs;
}

}  // namespace

std::vector<int> find_candidate_set(const ProblemInstance& inst, int j,
                                    const Rat* budget_cap) {
  const auto& u = inst.u[j - 1];
  const auto& c = inst.c[j - 1];
  std::vector<int> idx;
  for (int k = 0; k < inst.K; ++k)
    if (!budget_cap || c[k] <= *budget_cap) idx.push_back(k);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (eff_less(u[a], c[a], u[b], c[b])) return false;
    if (eff_less(u[b], c[b], u[a], c[a])) return true;
    if (u[a] != u[b]) return u[a] < u[b];
    return a < b;
  });

  // Dominance pass: an action is useless if some more efficient action
  // already yields at least its reward.
  std::vector<int> kept;
  double umax = -1.0;
  for (int k : idx) {
    if (u[k] > umax) {
      kept.push_back(k);
      umax = u[k];
    }
  }

  // Hull pass: walk the (cost, reward) frontier taking the steepest marginal
  // upgrade each time; interior points never appear in an optimal mix.
  std::vector<int> hull;
  if (!kept.empty()) {
    size_t a = 0;
    hull.push_back(kept[0]);
    while (a + 1 < kept.size()) {
      size_t best = a + 1;
      long double best_eff = -1.0L;
      for (size_t a2 = a + 1; a2 < kept.size(); ++a2) {
        long double dc = (long double)(c[kept[a2]] - c[kept[a]]).to_double();
        long double eff = ((long double)u[kept[a2]] - u[kept[a]]) / dc;
        if (eff >= best_eff) {  // ties go to the farthest point
          best_eff = eff;
          best = a2;
        }
      }
      hull.push_back(kept[best]);
      a = best;
    }
  }
  for (int& k : hull) k += 1;
  return hull;
}

HetLpSolution het_lp_solve(const ProblemInstance& inst, const Rat& rho,
                           const Rat* budget_cap) {
  if (rho < Rat(0)) throw ContractViolation("het_lp_solve: negative budget rate");
  HetLpSolution s;
  s.candidates.resize(inst.J);
  for (int j = 1; j <= inst.J; ++j) {
    s.candidates[j - 1] = find_candidate_set(inst, j, budget_cap);
    const auto& cand = s.candidates[j - 1];
    double prev_u = 0.0;
    Rat prev_c(0);
    double prev_eff = 0.0;
    for (size_t a = 0; a < cand.size(); ++a) {
      VirtualAction va;
      va.context = j;
      va.slot = (int)a;
      va.action = cand[a];
      va.du = inst.u[j - 1][cand[a] - 1] - prev_u;
      va.dc = inst.c[j - 1][cand[a] - 1] - prev_c;
      va.eff = va.du / va.dc.to_double();
      // Marginal efficiencies are nonincreasing along the hull; clamp out
      // last-bit rounding so the global sort cannot reorder a context.
      if (a > 0 && va.eff > prev_eff) va.eff = prev_eff;
      prev_eff = va.eff;
      prev_u = inst.u[j - 1][cand[a] - 1];
      prev_c = inst.c[j - 1][cand[a] - 1];
      s.order.push_back(va);
    }
  }
  std::sort(s.order.begin(), s.order.end(),
            [](const VirtualAction& a, const VirtualAction& b) {
              if (a.eff != b.eff) return a.eff > b.eff;
              if (a.context != b.context) return a.context < b.context;
              return a.slot < b.slot;
            });

  s.boundaries.resize(s.order.size());
  Rat acc(0);
  for (size_t i = 0; i < s.order.size(); ++i) {
    acc += inst.pi[s.order[i].context - 1] * s.order[i].dc;
    s.boundaries[i] = acc;
  }
  size_t thr = 0;
  while (thr < s.order.size() && s.boundaries[thr] <= rho) ++thr;
  s.threshold = (int)thr;
  if (thr < s.order.size()) {
    Rat prev = thr == 0 ? Rat(0) : s.boundaries[thr - 1];
    Rat rest = rho - prev;
    if (rest > Rat(0)) {
      Rat weight = inst.pi[s.order[thr].context - 1] * s.order[thr].dc;
      s.frac = div_approx_on_overflow(rest, weight);
    }
  }

  s.p.assign(inst.J, std::vector<Rat>(inst.K, Rat(0)));
  std::vector<std::vector<Rat>> ptilde(inst.J);
  for (int j = 0; j < inst.J; ++j) ptilde[j].assign(s.candidates[j].size(), Rat(0));
  for (size_t i = 0; i < s.order.size(); ++i) {
    const auto& va = s.order[i];
    if ((int)i < s.threshold)
      ptilde[va.context - 1][va.slot] = Rat(1);
    else if ((int)i == s.threshold)
      ptilde[va.context - 1][va.slot] = s.frac;
  }
  double value = 0.0;
  for (size_t i = 0; i < s.order.size(); ++i) {
    const auto& va = s.order[i];
    const auto& pt = ptilde[va.context - 1];
    Rat next = va.slot + 1 < (int)pt.size() ? pt[va.slot + 1] : Rat(0);
    s.p[va.context - 1][va.action - 1] = pt[va.slot] - next;
    value += inst.pi_d[va.context - 1] * pt[va.slot].to_double() * va.du;
  }
  s.value = value;
  s.spend = s.boundaries.empty() ? Rat(0) : min(rho, s.boundaries.back());
  return s;
}

double het_single_round_value(const ProblemInstance& inst, const Rat& rho) {
  return het_lp_solve(inst, rho).value;
}

double het_upper_bound(const ProblemInstance& inst, std::int64_t T, const Rat& B) {
  if (T <= 0) throw ConfigError("het_upper_bound: horizon must be positive");
  return (double)T * het_lp_solve(inst, B / Rat(T)).value;
}

}  // namespace bcb
