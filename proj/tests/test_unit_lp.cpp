#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bcb/instance.hpp"
#include "bcb/rational.hpp"
#include "bcb/unit_lp.hpp"

using namespace bcb;

namespace {

// Brute-force oracle, written before the solver was tested against it.
// The feasible set { p in [0,1]^J : sum pi_j p_j <= rho } is a box cut by one
// hyperplane, so every vertex has all coordinates at a bound except at most
// one, where the budget row is tight. Enumerating those vertices over subsets
// of fully-served contexts finds the exact optimum in rational arithmetic,
// without assuming anything about reward ordering.
Rat unit_oracle(const std::vector<Rat>& pi, const std::vector<Rat>& ustar,
                const Rat& rho) {
  const int J = (int)pi.size();
  Rat best(0);
  for (int mask = 0; mask < (1 << J); ++mask) {
    Rat mass(0), val(0);
    for (int j = 0; j < J; ++j)
      if (mask & (1 << j)) {
        mass += pi[j];
        val += pi[j] * ustar[j];
      }
    if (mass > rho) continue;
    if (val > best) best = val;
    for (int f = 0; f < J; ++f) {
      if (mask & (1 << f)) continue;
      if (pi[f] == Rat(0)) continue;
      Rat frac = min(Rat(1), (rho - mass) / pi[f]);
      Rat v = val + frac * pi[f] * ustar[f];
      if (v > best) best = v;
    }
  }
  return best;
}

// Rational single-round value of a solver solution, for exact comparison.
Rat solution_value(const GapTable& gap, const UnitLpSolution& sol,
                   const std::vector<Rat>& ustar_rat) {
  Rat v(0);
  for (int r = 0; r < gap.J; ++r)
    v += sol.p[r] * gap.pi_ranked[r] * ustar_rat[gap.order[r]];
  return v;
}

ProblemInstance two_context() {
  return make_unit_instance(
      {Rat(2, 5), Rat(3, 5)},
      {{0.26666666666666666, 0.5333333333333333, 0.8},
       {0.13333333333333333, 0.26666666666666666, 0.4}},
      RewardFamily::Bernoulli);
}

}  // namespace

TEST_CASE("threshold walks the cumulative boundaries") {
  GapTable gap = build_gap_table(two_context());
  CHECK(unit_threshold(gap, Rat(39, 100)) == 0);
  CHECK(unit_threshold(gap, Rat(2, 5)) == 1);
  CHECK(unit_threshold(gap, Rat(41, 100)) == 1);
  CHECK(unit_threshold(gap, Rat(1)) == 2);
  CHECK(unit_threshold(gap, Rat(3, 2)) == 2);
  CHECK(unit_threshold(gap, Rat(0)) == 0);
}

TEST_CASE("two-context solutions at the pinned rates") {
  GapTable gap = build_gap_table(two_context());

  UnitLpSolution s = unit_lp_solve(gap, Rat(39, 100));
  CHECK(s.threshold == 0);
  CHECK(s.frac == Rat(39, 40));  // 0.39 / 0.4
  CHECK(s.p == std::vector<Rat>{Rat(39, 40), Rat(0)});
  CHECK(s.value == doctest::Approx(0.312).epsilon(1e-12));

  s = unit_lp_solve(gap, Rat(41, 100));
  CHECK(s.threshold == 1);
  CHECK(s.frac == Rat(1, 60));  // (0.41 - 0.4) / 0.6
  CHECK(s.p == std::vector<Rat>{Rat(1), Rat(1, 60)});
  CHECK(s.value == doctest::Approx(0.324).epsilon(1e-12));

  s = unit_lp_solve(gap, Rat(1));
  CHECK(s.threshold == 2);
  CHECK(s.frac == Rat(0));
  CHECK(s.p == std::vector<Rat>{Rat(1), Rat(1)});
  CHECK(s.value == doctest::Approx(0.56).epsilon(1e-12));

  // at the boundary the fractional context is the next rank, served at 0
  s = unit_lp_solve(gap, Rat(2, 5));
  CHECK(s.threshold == 1);
  CHECK(s.frac == Rat(0));
  CHECK(s.p == std::vector<Rat>{Rat(1), Rat(0)});
  CHECK(s.value == doctest::Approx(0.32).epsilon(1e-12));

  CHECK(single_round_value(gap, Rat(0)) == 0.0);
}

TEST_CASE("value function is piecewise linear in rho") {
  GapTable gap = build_gap_table(two_context());
  // v(rho) = 0.8 rho below the kink at 0.4, then 0.32 + 0.4 (rho - 0.4)
  for (int i = 1; i <= 8; ++i) {
    Rat rho(i, 20);
    CHECK(single_round_value(gap, rho) ==
          doctest::Approx(0.8 * rho.to_double()).epsilon(1e-12));
  }
  for (int i = 9; i <= 20; ++i) {
    Rat rho(i, 20);
    CHECK(single_round_value(gap, rho) ==
          doctest::Approx(0.32 + 0.4 * (rho.to_double() - 0.4)).epsilon(1e-12));
  }
}

TEST_CASE("ten-context value at the half-mass boundary") {
  std::vector<Rat> pi = {Rat(1, 40), Rat(1, 20), Rat(3, 40), Rat(3, 20),
                         Rat(1, 5),  Rat(1, 5),  Rat(3, 20), Rat(3, 40),
                         Rat(1, 20), Rat(1, 40)};
  std::vector<std::vector<double>> u(10, std::vector<double>(5));
  for (int j = 1; j <= 10; ++j)
    for (int k = 1; k <= 5; ++k) u[j - 1][k - 1] = double(j * k) / 50.0;
  GapTable gap = build_gap_table(
      make_unit_instance(pi, u, RewardFamily::Bernoulli));
  CHECK(unit_threshold(gap, Rat(1, 2)) == 5);
  // top half: contexts 10..6 at full service
  // v = (1*.025 + .9*.05 + .8*.075 + .7*.15 + .6*.2) = 0.355
  CHECK(single_round_value(gap, Rat(1, 2)) == doctest::Approx(0.355).epsilon(1e-12));
}

TEST_CASE("upper bound scales the single-round value") {
  ProblemInstance inst = two_context();
  CHECK(upper_bound(inst, 1000, Rat(390)) == doctest::Approx(312.0).epsilon(1e-12));
  CHECK(upper_bound(inst, 1000, Rat(410)) == doctest::Approx(324.0).epsilon(1e-12));
  CHECK(upper_bound(inst, 10, Rat(0)) == 0.0);
  // budget beyond T saturates at full service
  CHECK(upper_bound(inst, 10, Rat(100)) == doctest::Approx(5.6).epsilon(1e-12));

  ProblemInstance flat = make_unit_instance(
      {Rat(1, 2), Rat(1, 2)}, {{1.0}, {0.0}}, RewardFamily::Bernoulli);
  CHECK(upper_bound(flat, 2, Rat(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solver agrees exactly with the vertex oracle") {
  // rewards on the 1/16 grid convert to rationals without error, so the
  // solver's allocation can be re-valued exactly and compared with no slack
  std::mt19937_64 rng(20260819);
  for (int trial = 0; trial < 500; ++trial) {
    int J = 1 + (int)(rng() % 4);
    std::vector<Rat> pi;
    std::vector<std::vector<double>> u;
    std::vector<Rat> ustar_rat;
    int left = 24;
    for (int j = 0; j < J; ++j) {
      int part = (j == J - 1) ? left : 1 + (int)(rng() % (left - (J - 1 - j)));
      left -= part;
      pi.push_back(Rat(part, 24));
      int grid = (int)(rng() % 17);
      u.push_back({double(grid) / 16.0});
      ustar_rat.push_back(Rat(grid, 16));
    }
    ProblemInstance inst = make_unit_instance(pi, u, RewardFamily::Bernoulli);
    GapTable gap = build_gap_table(inst);
    Rat rho((int)(rng() % 29), 24);  // spans infeasible through saturated

    UnitLpSolution sol = unit_lp_solve(gap, rho);
    Rat got = solution_value(gap, sol, ustar_rat);
    Rat want = unit_oracle(pi, ustar_rat, rho);
    CHECK(got == want);
    CHECK(sol.value == doctest::Approx(got.to_double()).epsilon(1e-12));

    // allocation is feasible: probabilities in [0,1], spend within rho
    Rat spend(0);
    for (int r = 0; r < J; ++r) {
      CHECK(sol.p[r] >= Rat(0));
      CHECK(sol.p[r] <= Rat(1));
      spend += sol.p[r] * gap.pi_ranked[r];
    }
    CHECK(spend <= min(rho, Rat(1)));
  }
}

TEST_CASE("value is monotone and concave in rho") {
  GapTable gap = build_gap_table(two_context());
  double prev = 0.0, prev_inc = 1e9;
  for (int i = 1; i <= 30; ++i) {
    double v = single_round_value(gap, Rat(i, 25));
    double inc = v - prev;
    CHECK(inc >= -1e-12);
    CHECK(inc <= prev_inc + 1e-12);
    prev = v;
    prev_inc = inc;
  }
}
