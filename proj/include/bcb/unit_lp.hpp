#pragma once

#include <vector>

#include "bcb/instance.hpp"
#include "bcb/rational.hpp"

namespace bcb {

// Single-round allocation for unit costs at average budget rho.
// Contexts are indexed by rank (best expected reward first, see GapTable).
// The first `threshold` ranked contexts are served with probability 1,
// the next one with probability `frac`, the rest never.
struct UnitLpSolution {
  int threshold = 0;           // number of fully served ranked contexts
  Rat frac{0};                 // service probability of rank threshold+1
  std::vector<Rat> p;          // per-rank probabilities, length J
  double value = 0.0;          // expected single-round reward
};

// Largest rank count whose cumulative probability stays within rho.
// Returns 0 when even the best context alone exceeds the budget rate.
int unit_threshold(const GapTable& gap, const Rat& rho);

UnitLpSolution unit_lp_solve(const GapTable& gap, const Rat& rho);

double single_round_value(const GapTable& gap, const Rat& rho);

// T * v(B/T), the fluid benchmark for unit-cost instances.
double upper_bound(const ProblemInstance& inst, std::int64_t T, const Rat& B);

}  // namespace bcb
