#include "bcb/bounds.hpp"

#include <cmath>
#include <limits>

#include "bcb/errors.hpp"
#include "bcb/unit_lp.hpp"

namespace bcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gap between the best reward of ranked context r_hi and action k of ranked
// context r_lo. Zero or negative gaps yield infinite bound terms.
double cross_gap(const ProblemInstance& inst, const GapTable& gap, int r_hi,
                 int r_lo, int k) {
  return gap.ustar[gap.order[r_hi]] - inst.u[gap.order[r_lo]][k];
}

double safe_inv(double g, double d) {
  if (g <= 0.0 || d <= 0.0) return kInf;
  return 27.0 / (2.0 * g * d * d);
}

}  // namespace

BoundReport bound_alp(const ProblemInstance& inst, const Rat& rho) {
  if (!inst.unit_cost())
    throw ConfigError("bound_alp: guarantees cover unit-cost instances only");
  GapTable gap = build_gap_table(inst);
  BoundReport r;
  r.rho = rho.to_double();
  int jt = unit_threshold(gap, rho);
  r.threshold = jt;
  r.spread = gap.ustar_ranked[0] - gap.ustar_ranked[gap.J - 1];
  r.boundary = jt >= 1 && jt <= gap.J - 1 && gap.q[jt] == rho;
  if (r.boundary) {
    double lo = (rho - gap.q[jt - 1]).to_double();
    double hi = (gap.q[jt + 1] - rho).to_double();
    r.delta = lo < hi ? lo : hi;
    r.theta_o = 2.0 * r.spread * std::sqrt(r.rho * (1.0 - r.rho));
  } else {
    double lo = (rho - gap.q[jt]).to_double();
    double hi = jt < gap.J ? (gap.q[jt + 1] - rho).to_double() : kInf;
    r.delta = lo < hi ? lo : hi;
  }
  double denom = 1.0 - std::exp(-2.0 * r.delta * r.delta);
  r.const_term = denom > 0.0 ? r.spread / denom : kInf;
  return r;
}

BoundReport bound_ucb_alp(const ProblemInstance& inst, const Rat& rho) {
  BoundReport r = bound_alp(inst, rho);
  GapTable gap = build_gap_table(inst);

  for (int j = 0; j < inst.J; ++j)
    for (int k = 1; k <= inst.K; ++k) {
      if (k == gap.kstar[j]) continue;
      double d = gap.ustar[j] - inst.u[j][k - 1];
      r.theta_a += d > 0.0 ? 2.0 / d + 2.0 * d : kInf;
    }

  int jt = r.threshold;
  double ubar = 0.0;
  for (int j = 0; j < inst.J; ++j) ubar += inst.pi_d[j] * gap.ustar[j];
  double scale = ubar + single_round_value(gap, rho);

  // Ranking-error mass around the fractionally served context. Off the
  // boundary that context is rank jt+1; on it, rank jt plays both roles.
  double sum = 0.0;
  if (!r.boundary) {
    if (jt >= gap.J) {
      r.theta_c = 0.0;  // every context fully served, ranking is irrelevant
      return r;
    }
    double half_lo = 0.5 * (rho - gap.q[jt]).to_double();
    double half_hi = 0.5 * (gap.q[jt + 1] - rho).to_double();
    auto g_of = [&](int rank) {
      double g = gap.pi_ranked[rank].to_double();
      if (half_lo < g) g = half_lo;
      if (half_hi < g) g = half_hi;
      return g;
    };
    for (int j = 0; j < jt; ++j)
      for (int k = 0; k < inst.K; ++k)
        sum += safe_inv(g_of(jt), cross_gap(inst, gap, j, jt, k));
    for (int j = jt + 1; j < gap.J; ++j)
      for (int k = 0; k < inst.K; ++k)
        sum += safe_inv(g_of(j), cross_gap(inst, gap, jt, j, k));
    sum += 2.0 * inst.K * inst.J;
  } else {
    double half_lo = 0.5 * (rho - gap.q[jt - 1]).to_double();
    double half_hi = 0.5 * (gap.q[jt + 1] - rho).to_double();
    auto g_of = [&](int rank) {
      double g = gap.pi_ranked[rank].to_double();
      if (half_lo < g) g = half_lo;
      if (half_hi < g) g = half_hi;
      return g;
    };
    for (int j = 0; j < jt - 1; ++j)
      for (int k = 0; k < inst.K; ++k)
        sum += safe_inv(g_of(jt - 1), cross_gap(inst, gap, j, jt - 1, k));
    for (int j = jt; j < gap.J; ++j)
      for (int k = 0; k < inst.K; ++k)
        sum += safe_inv(g_of(j), cross_gap(inst, gap, jt - 1, j, k));
    sum += 2.0 * inst.K * (inst.J - 1);
  }
  r.theta_c = scale * sum;
  return r;
}

double alp_regret_bound(const BoundReport& r, std::int64_t T) {
  double bound = r.const_term;
  if (r.boundary) bound += r.theta_o * std::sqrt((double)T);
  return bound;
}

double ucb_alp_regret_bound(const BoundReport& r, std::int64_t T) {
  return alp_regret_bound(r, T) + (r.theta_a + r.theta_c) * std::log((double)T);
}

}  // namespace bcb
