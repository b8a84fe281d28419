#pragma once

#include <cstdint>
#include <vector>

#include "bcb/instance.hpp"
#include "bcb/policies.hpp"
#include "bcb/rng.hpp"

namespace bcb {

struct EpisodeOutcome {
  double total_reward = 0.0;
  std::int64_t taken = 0;  // non-dummy actions
  Rat spent{0};
  std::int64_t forced_dummy = 0;
  std::int64_t freeze_round = 0;
  bool freeze_clamped = false;
  std::int64_t explore_len = 0;  // exploration rounds actually used
};

// Plays one episode. The three streams are consumed at a fixed rate (one
// context draw, one reward draw, one policy draw per round), so episodes
// with the same run seed see identical environments under every policy.
EpisodeOutcome run_episode(const ProblemInstance& inst, const GapTable& gap,
                           PolicyKind kind, const PolicyOptions& opt,
                           std::int64_t T, const Rat& B, RunStreams& streams,
                           EpisodeTrace* trace = nullptr);

enum class Benchmark { FluidLp, Dp };

struct RegretRequest {
  PolicyKind kind = PolicyKind::Alp;
  PolicyOptions opt;
  std::int64_t T = 0;
  Rat B{0};
  int runs = 0;
  std::uint64_t master_seed = 0;
  Benchmark benchmark = Benchmark::FluidLp;
  int threads = 1;
  bool keep_run_totals = false;
};

struct RegretReport {
  double benchmark_value = 0.0;  // T*v(rho), or the exact optimum under Dp
  double mean_reward = 0.0;
  double regret_mean = 0.0;
  double regret_se = 0.0;
  double regret_ci95 = 0.0;  // 1.96 * regret_se
  std::int64_t forced_dummy = 0;      // summed over runs
  std::int64_t clamped_runs = 0;      // runs whose schedule hit the horizon
  std::vector<double> run_totals;     // filled when requested
};

// Monte-Carlo regret estimate. Runs are dispatched to `threads` workers but
// seeded by run index and reduced in index order, so the report is
// bit-identical for any thread count.
RegretReport estimate_regret(const ProblemInstance& inst,
                             const RegretRequest& req);

struct BudgetMoments {
  std::int64_t tau = 0;
  double mean = 0.0;
  double var = 0.0;        // sample variance over runs
  double tail_freq = 0.0;  // fraction of runs with b_tau < (rho - delta) tau
};

// Empirical moments of the remaining budget b_tau at chosen checkpoints.
// tail_delta sets the margin for the lower-tail frequency (0 disables it).
std::vector<BudgetMoments> budget_stats(const ProblemInstance& inst,
                                        PolicyKind kind,
                                        const PolicyOptions& opt,
                                        std::int64_t T, const Rat& B,
                                        const std::vector<std::int64_t>& taus,
                                        int runs, std::uint64_t master_seed,
                                        int threads, double tail_delta = 0.0);

struct WlsFit {
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
};

// Weighted least squares line through (x, y) with per-point variances.
WlsFit wls_slope(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& var);

struct GrowthCheck {
  std::vector<double> diffs;  // y[i+1] - y[i] along a doubling grid
  bool nonincreasing = true;  // true when no difference rises beyond noise
};

// Doubling-grid growth diagnostic: for regret measured at T0*2^i with
// standard errors se, reports consecutive differences and whether they are
// non-increasing beyond the 95% noise band. Adjacent differences share the
// middle point, hence the 1-4-1 variance combination.
GrowthCheck growth_check(const std::vector<double>& regret,
                         const std::vector<double>& se);

}  // namespace bcb
