#include <doctest.h>

#include <cmath>
#include <vector>

#include "bcb/errors.hpp"
#include "bcb/instance.hpp"
#include "bcb/rng.hpp"

using namespace bcb;

namespace {

ProblemInstance two_context() {
  return make_unit_instance(
      {Rat(2, 5), Rat(3, 5)},
      {{0.26666666666666666, 0.5333333333333333, 0.8},
       {0.13333333333333333, 0.26666666666666666, 0.4}},
      RewardFamily::Bernoulli);
}

// symmetric ten-context distribution with u_{j,k} = j*k / (J*K)
ProblemInstance ten_context() {
  std::vector<Rat> pi = {Rat(1, 40),  Rat(1, 20), Rat(3, 40), Rat(3, 20),
                         Rat(1, 5),   Rat(1, 5),  Rat(3, 20), Rat(3, 40),
                         Rat(1, 20),  Rat(1, 40)};
  std::vector<std::vector<double>> u(10, std::vector<double>(5));
  for (int j = 1; j <= 10; ++j)
    for (int k = 1; k <= 5; ++k) u[j - 1][k - 1] = double(j * k) / 50.0;
  return make_unit_instance(pi, u, RewardFamily::Bernoulli);
}

}  // namespace

TEST_CASE("validate rejects malformed instances") {
  ProblemInstance good = two_context();
  CHECK_NOTHROW(good.validate());

  ProblemInstance bad = good;
  bad.pi = {Rat(1, 2), Rat(1, 4)};  // sums to 3/4
  bad.pi_d = {0.5, 0.25};
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = good;
  bad.u[0][1] = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = good;
  bad.u[1][0] = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = good;
  bad.c[0][2] = Rat(0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = good;
  bad.u.pop_back();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("unit_cost and cost helpers") {
  ProblemInstance inst = two_context();
  CHECK(inst.unit_cost());
  CHECK(inst.max_cost() == Rat(1));
  CHECK(inst.min_cost(1) == Rat(1));

  inst.c[1][2] = Rat(3);
  CHECK_FALSE(inst.unit_cost());
  CHECK(inst.max_cost() == Rat(3));
  CHECK(inst.min_cost(1) == Rat(1));
  CHECK(inst.min_cost(2) == Rat(1));
}

TEST_CASE("sample_context matches the distribution") {
  ProblemInstance inst = two_context();
  RngStream rng(12345);

  const int n = 1000000;
  int ones = 0;
  for (int i = 0; i < n; ++i)
    if (sample_context(inst, rng) == 1) ++ones;
  // 3-sigma band around 0.4 is about +-0.0015
  CHECK(std::abs(double(ones) / n - 0.4) < 0.002);

  // degenerate distribution still consumes one uniform per call
  ProblemInstance sure = make_unit_instance({Rat(1)}, {{0.5}}, RewardFamily::Bernoulli);
  RngStream r2(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_context(sure, r2) == 1);
}

TEST_CASE("sample_reward families") {
  ProblemInstance det = two_context();
  det.family = RewardFamily::Deterministic;
  RngStream rng(7);
  for (int i = 0; i < 50; ++i) CHECK(sample_reward(det, 1, 3, rng) == 0.8);

  ProblemInstance ber = two_context();
  RngStream r2(99);
  const int n = 1000000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    double x = sample_reward(ber, 2, 3, r2);
    CHECK((x == 0.0 || x == 1.0));
    sum += x;
  }
  CHECK(std::abs(sum / n - 0.4) < 0.002);

  // zero-mean arm never pays out
  ProblemInstance zero = make_unit_instance({Rat(1)}, {{0.0}}, RewardFamily::Bernoulli);
  RngStream r3(3);
  for (int i = 0; i < 100; ++i) CHECK(sample_reward(zero, 1, 1, r3) == 0.0);
}

TEST_CASE("apply_action charges exact costs and guards the budget") {
  ProblemInstance inst = two_context();
  inst.family = RewardFamily::Deterministic;
  BudgetClock clock = BudgetClock::start(10, Rat(5));
  RngStream rng(42);

  // dummy: no reward, no cost, clock still advances
  ActionOutcome out = apply_action(clock, inst, 1, 0, rng);
  CHECK(out.reward == 0.0);
  CHECK(out.cost == Rat(0));
  CHECK(clock.b == Rat(5));
  CHECK(clock.tau == 9);

  out = apply_action(clock, inst, 1, 3, rng);
  CHECK(out.reward == 0.8);
  CHECK(out.cost == Rat(1));
  CHECK(clock.b == Rat(4));
  CHECK(clock.tau == 8);

  // unaffordable action is a contract violation, not a silent skip
  ProblemInstance het = inst;
  het.c[0][2] = Rat(3);
  BudgetClock poor = BudgetClock::start(5, Rat(2));
  CHECK_THROWS_AS(apply_action(poor, het, 1, 3, rng), ContractViolation);

  // out-of-range action index
  CHECK_THROWS_AS(apply_action(clock, inst, 1, 4, rng), ContractViolation);
  CHECK_THROWS_AS(apply_action(clock, inst, 3, 1, rng), ContractViolation);
}

TEST_CASE("reward stream consumption is action independent") {
  ProblemInstance inst = two_context();
  // same seed, different actions taken; the third call must see the same
  // uniform in both timelines
  RngStream a(555), b(555);
  BudgetClock ca = BudgetClock::start(10, Rat(5));
  BudgetClock cb = BudgetClock::start(10, Rat(5));
  apply_action(ca, inst, 1, 3, a);
  apply_action(ca, inst, 1, 3, a);
  apply_action(cb, inst, 1, 0, b);
  apply_action(cb, inst, 2, 1, b);
  double ra = apply_action(ca, inst, 2, 2, a).reward;
  double rb = apply_action(cb, inst, 2, 2, b).reward;
  CHECK(ra == rb);
}

TEST_CASE("gap table ranks contexts by best reward") {
  GapTable gap = build_gap_table(two_context());
  CHECK(gap.J == 2);
  CHECK(gap.order == std::vector<int>{0, 1});
  CHECK(gap.rank_of == std::vector<int>{0, 1});
  CHECK(gap.ustar == std::vector<double>{0.8, 0.4});
  CHECK(gap.kstar == std::vector<int>{3, 3});
  REQUIRE(gap.q.size() == 3);
  CHECK(gap.q[0] == Rat(0));
  CHECK(gap.q[1] == Rat(2, 5));
  CHECK(gap.q[2] == Rat(1));
  CHECK(gap.ustar_ranked == std::vector<double>{0.8, 0.4});
  CHECK(gap.pi_ranked == std::vector<Rat>{Rat(2, 5), Rat(3, 5)});
}

TEST_CASE("gap table on the ten-context family") {
  GapTable gap = build_gap_table(ten_context());
  // best reward grows with the context index, so rank order is 10..1
  for (int r = 0; r < 10; ++r) CHECK(gap.order[r] == 9 - r);
  CHECK(gap.ustar[9] == 1.0);
  CHECK(gap.kstar == std::vector<int>(10, 5));
  // cumulative mass of the top five contexts is exactly one half
  CHECK(gap.q[5] == Rat(1, 2));
  CHECK(gap.q[10] == Rat(1));
}

TEST_CASE("gap table tie break keeps original order") {
  ProblemInstance inst = make_unit_instance(
      {Rat(1, 4), Rat(1, 2), Rat(1, 4)},
      {{0.5, 0.7}, {0.7, 0.3}, {0.9, 0.1}},
      RewardFamily::Bernoulli);
  GapTable gap = build_gap_table(inst);
  // contexts 1 and 2 tie at 0.7; context 3 wins with 0.9
  CHECK(gap.order == std::vector<int>{2, 0, 1});
  CHECK(gap.kstar == std::vector<int>{2, 1, 1});
  CHECK(gap.q[1] == Rat(1, 4));
  CHECK(gap.q[2] == Rat(1, 2));

  // single context: the only boundary is the full mass
  GapTable solo = build_gap_table(
      make_unit_instance({Rat(1)}, {{0.3, 0.6}}, RewardFamily::Bernoulli));
  CHECK(solo.q == std::vector<Rat>{Rat(0), Rat(1)});
  CHECK(solo.kstar == std::vector<int>{2});
}

TEST_CASE("episode trace budget lookup") {
  EpisodeTrace trace;
  trace.T = 4;
  trace.B = Rat(2);
  trace.rows = {
      {1, 1, 3, 1.0, Rat(1), Rat(1)},
      {2, 2, 0, 0.0, Rat(0), Rat(1)},
      {3, 1, 3, 0.0, Rat(1), Rat(0)},
      {4, 2, 0, 0.0, Rat(0), Rat(0)},
  };
  CHECK(trace.budget_at(4) == Rat(2));   // before the first round
  CHECK(trace.budget_at(5) == Rat(2));
  CHECK(trace.budget_at(3) == Rat(1));   // after round 1
  CHECK(trace.budget_at(2) == Rat(1));
  CHECK(trace.budget_at(1) == Rat(0));
  CHECK(trace.budget_at(0) == Rat(0));
}
