#include "bcb/dp.hpp"

#include "bcb/errors.hpp"

namespace bcb {

ValueTable dp_solve(const ProblemInstance& inst, std::int64_t T, const Rat& B) {
  if (!inst.unit_cost())
    throw ConfigError("dp_solve: tabulation requires unit costs");
  if (T < 0 || B < Rat(0) || !B.is_integer())
    throw ConfigError("dp_solve: budget must be a nonnegative integer");
  std::int64_t Bi = B.num();
  if (Bi > T) Bi = T;  // surplus budget can never be spent
  if (T * Bi > 1000000)
    throw ConfigError("dp_solve: state space too large, keep T*B within 1e6");

  GapTable gap = build_gap_table(inst);
  ValueTable tab;
  tab.T = T;
  tab.B = Bi;
  tab.v.assign((T + 1) * (Bi + 1), 0.0);
  for (std::int64_t tau = 1; tau <= T; ++tau) {
    const double* prev = &tab.v[(tau - 1) * (Bi + 1)];
    double* cur = &tab.v[tau * (Bi + 1)];
    cur[0] = 0.0;
    for (std::int64_t b = 1; b <= Bi; ++b) {
      double acc = 0.0;
      for (int j = 0; j < inst.J; ++j) {
        double take = gap.ustar[j] + prev[b - 1];
        double skip = prev[b];
        acc += inst.pi_d[j] * (take >= skip ? take : skip);
      }
      cur[b] = acc;
    }
  }
  return tab;
}

int dp_act(const ValueTable& table, const GapTable& gap, std::int64_t tau,
           std::int64_t b, int j) {
  if (b <= 0 || tau <= 0) return 0;
  if (b > table.B) b = table.B;
  if (b > tau) b = tau;  // cannot spend more than the rounds left
  double take = gap.ustar[j - 1] + table.at(tau - 1, b - 1);
  double skip = table.at(tau - 1, b);
  return take >= skip ? gap.kstar[j - 1] : 0;
}

}  // namespace bcb
