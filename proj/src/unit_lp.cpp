#include "bcb/unit_lp.hpp"

#include "bcb/errors.hpp"

namespace bcb {

int unit_threshold(const GapTable& gap, const Rat& rho) {
  int jt = 0;
  while (jt < gap.J && gap.q[jt + 1] <= rho) ++jt;
  return jt;
}

UnitLpSolution unit_lp_solve(const GapTable& gap, const Rat& rho) {
  UnitLpSolution s;
  if (rho < Rat(0)) throw ContractViolation("unit_lp_solve: negative budget rate");
  s.threshold = unit_threshold(gap, rho);
  s.p.assign(gap.J, Rat(0));
  for (int r = 0; r < s.threshold; ++r) s.p[r] = Rat(1);
  if (s.threshold < gap.J) {
    Rat rest = rho - gap.q[s.threshold];
    if (rest > Rat(0)) {
      // threshold maximality gives q[threshold+1] > rho, so 0 < rest < pi.
      s.frac = div_approx_on_overflow(rest, gap.pi_ranked[s.threshold]);
      s.p[s.threshold] = s.frac;
    }
  }
  double v = 0.0;
  for (int r = 0; r < gap.J; ++r)
    if (s.p[r] != Rat(0))
      v += s.p[r].to_double() * gap.pi_ranked[r].to_double() * gap.ustar_ranked[r];
  s.value = v;
  return s;
}

double single_round_value(const GapTable& gap, const Rat& rho) {
  return unit_lp_solve(gap, rho).value;
}

double upper_bound(const ProblemInstance& inst, std::int64_t T, const Rat& B) {
  if (!inst.unit_cost())
    throw ConfigError("upper_bound: defined for unit-cost instances only");
  if (T <= 0) throw ConfigError("upper_bound: horizon must be positive");
  GapTable gap = build_gap_table(inst);
  Rat rho = B / Rat(T);
  if (rho > Rat(1)) rho = Rat(1);
  return (double)T * single_round_value(gap, rho);
}

}  // namespace bcb
