#pragma once

#include <cstdint>
#include <vector>

#include "bcb/instance.hpp"

namespace bcb {

// Exact expected value of the budgeted process under the best possible
// policy, for unit costs and integer budgets. V(tau, b) is the optimal
// expected reward-to-go with tau rounds and b pulls remaining.
struct ValueTable {
  std::int64_t T = 0;
  std::int64_t B = 0;
  std::vector<double> v;  // (T+1) x (B+1), row-major by tau

  double at(std::int64_t tau, std::int64_t b) const {
    if (b > B) b = B;
    return v[tau * (B + 1) + b];
  }
  double value() const { return at(T, B); }
};

// Requires unit costs, integer B >= 0, and T*B small enough to tabulate.
ValueTable dp_solve(const ProblemInstance& inst, std::int64_t T, const Rat& B);

// Optimal action for context j with tau rounds and b budget left.
// Returns the context's best action id, or 0 to skip. Ties favor taking.
int dp_act(const ValueTable& table, const GapTable& gap, std::int64_t tau,
           std::int64_t b, int j);

}  // namespace bcb
