#pragma once

#include <cstdint>

#include "bcb/instance.hpp"

namespace bcb {

// Analytic regret guarantees for the adaptive-allocation policies on
// unit-cost instances. All context indices below refer to the ranked order
// (best expected reward first); rho sits strictly between two service
// boundaries q_j in the non-boundary case and exactly on one otherwise.
struct BoundReport {
  bool boundary = false;
  int threshold = 0;       // fully served ranked contexts at rate rho
  double rho = 0.0;
  double delta = 0.0;      // distance to the nearest boundary, or the
                           // distance to the two flanking ones when on a
                           // boundary (delta_prime in that case)
  double spread = 0.0;     // best minus worst per-context optimal reward
  double theta_o = 0.0;    // sqrt(T) coefficient, boundary cases only
  double const_term = 0.0; // additive constant, spread / (1 - e^{-2 delta^2})
  double theta_a = 0.0;    // log(T) coefficient from per-context learning
  double theta_c = 0.0;    // log(T) coefficient from context ranking errors
};

// Budget-adaptivity guarantee: regret of the adaptive allocation with known
// statistics is at most const_term, plus theta_o * sqrt(T) on a boundary.
BoundReport bound_alp(const ProblemInstance& inst, const Rat& rho);

// Adds the learning terms for the confidence-bound variant: regret is at
// most (theta_a + theta_c) * log(T) + const_term (+ theta_o * sqrt(T)).
BoundReport bound_ucb_alp(const ProblemInstance& inst, const Rat& rho);

double alp_regret_bound(const BoundReport& r, std::int64_t T);
double ucb_alp_regret_bound(const BoundReport& r, std::int64_t T);

}  // namespace bcb
