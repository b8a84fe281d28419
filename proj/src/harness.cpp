#include "bcb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "bcb/dp.hpp"
#include "bcb/errors.hpp"
#include "bcb/het_lp.hpp"
#include "bcb/unit_lp.hpp"

namespace bcb {

EpisodeOutcome run_episode(const ProblemInstance& inst, const GapTable& gap,
                           PolicyKind kind, const PolicyOptions& opt,
                           std::int64_t T, const Rat& B, RunStreams& streams,
                           EpisodeTrace* trace) {
  BudgetClock clock = BudgetClock::start(T, B);
  PolicyState st = make_policy_state(kind, opt, inst, T, B);
  EpisodeOutcome out;
  if (trace) {
    trace->T = T;
    trace->B = B;
    trace->rows.clear();
    trace->rows.reserve((std::size_t)T);
    trace->total_reward = 0.0;
  }
  for (std::int64_t t = 1; t <= T; ++t) {
    int j = sample_context(inst, streams.context);
    int k = policy_decide(st, inst, gap, clock, j, streams.policy);
    ActionOutcome res = apply_action(clock, inst, j, k, streams.reward);
    policy_observe(st, inst, j, k, res.reward);
    out.total_reward += res.reward;
    if (k > 0) {
      out.taken += 1;
      out.spent = out.spent + res.cost;
    }
    if (trace)
      trace->rows.push_back({t, j, k, res.reward, res.cost, clock.b});
  }
  if (trace) trace->total_reward = out.total_reward;
  out.forced_dummy = st.forced_dummy;
  out.freeze_round = st.freeze_round;
  out.freeze_clamped = st.freeze_clamped;
  out.explore_len = st.explore_len;
  return out;
}

namespace {

// Dispatches `runs` jobs to `threads` workers. Each job sees only its own
// index; any exception is rethrown on the calling thread after join.
template <typename Fn>
void parallel_runs(int runs, int threads, Fn&& job) {
  if (threads <= 1 || runs <= 1) {
    for (int i = 0; i < runs; ++i) job(i);
    return;
  }
  int workers = std::min(threads, runs);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto loop = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= runs) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve((std::size_t)workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

RegretReport estimate_regret(const ProblemInstance& inst,
                             const RegretRequest& req) {
  if (req.runs < 1) throw ConfigError("estimate_regret: runs must be >= 1");
  if (req.T < 1) throw ConfigError("estimate_regret: horizon must be >= 1");
  const bool unit = inst.unit_cost();
  GapTable gap = build_gap_table(inst);
  if (!unit && policy_requires_unit_cost(req.kind))
    throw ConfigError(std::string("policy ") + policy_id(req.kind) +
                      " needs unit costs");
  if (inst.J != 2 && policy_requires_two_contexts(req.kind))
    throw ConfigError(std::string("policy ") + policy_id(req.kind) +
                      " needs exactly two contexts");

  RegretReport rep;
  rep.benchmark_value = req.benchmark == Benchmark::Dp
                            ? dp_solve(inst, req.T, req.B).value()
                            : (unit ? upper_bound(inst, req.T, req.B)
                                    : het_upper_bound(inst, req.T, req.B));

  std::vector<double> totals((std::size_t)req.runs);
  std::vector<std::int64_t> dummies((std::size_t)req.runs);
  std::vector<unsigned char> clamped((std::size_t)req.runs);
  parallel_runs(req.runs, req.threads, [&](int i) {
    RunStreams streams =
        make_run_streams(req.master_seed, (std::uint64_t)req.T,
                         (std::uint64_t)i);
    EpisodeOutcome out =
        run_episode(inst, gap, req.kind, req.opt, req.T, req.B, streams);
    totals[(std::size_t)i] = out.total_reward;
    dummies[(std::size_t)i] = out.forced_dummy;
    clamped[(std::size_t)i] = out.freeze_clamped ? 1 : 0;
  });

  double sum = 0.0;
  for (double x : totals) sum += x;
  rep.mean_reward = sum / req.runs;
  double ss = 0.0;
  for (double x : totals) ss += (x - rep.mean_reward) * (x - rep.mean_reward);
  double var = req.runs > 1 ? ss / (req.runs - 1) : 0.0;
  rep.regret_mean = rep.benchmark_value - rep.mean_reward;
  rep.regret_se = std::sqrt(var / req.runs);
  rep.regret_ci95 = 1.96 * rep.regret_se;
  for (auto d : dummies) rep.forced_dummy += d;
  for (auto c : clamped) rep.clamped_runs += c;
  if (req.keep_run_totals) rep.run_totals = std::move(totals);
  return rep;
}

std::vector<BudgetMoments> budget_stats(const ProblemInstance& inst,
                                        PolicyKind kind,
                                        const PolicyOptions& opt,
                                        std::int64_t T, const Rat& B,
                                        const std::vector<std::int64_t>& taus,
                                        int runs, std::uint64_t master_seed,
                                        int threads, double tail_delta) {
  if (runs < 2) throw ConfigError("budget_stats: runs must be >= 2");
  for (auto tau : taus)
    if (tau < 0 || tau > T) throw ConfigError("budget_stats: tau outside [0,T]");
  GapTable gap = build_gap_table(inst);
  std::vector<std::vector<double>> samples(
      taus.size(), std::vector<double>((std::size_t)runs));
  parallel_runs(runs, threads, [&](int i) {
    RunStreams streams =
        make_run_streams(master_seed, (std::uint64_t)T, (std::uint64_t)i);
    EpisodeTrace trace;
    run_episode(inst, gap, kind, opt, T, B, streams, &trace);
    for (std::size_t ti = 0; ti < taus.size(); ++ti)
      samples[ti][(std::size_t)i] = trace.budget_at(taus[ti]).to_double();
  });
  double rho = (B / Rat(T)).to_double();
  std::vector<BudgetMoments> out(taus.size());
  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    double sum = 0.0;
    for (double x : samples[ti]) sum += x;
    double mean = sum / runs;
    double ss = 0.0;
    std::int64_t below = 0;
    double cut = (rho - tail_delta) * (double)taus[ti];
    for (double x : samples[ti]) {
      ss += (x - mean) * (x - mean);
      if (tail_delta > 0.0 && x < cut) ++below;
    }
    out[ti] = {taus[ti], mean, ss / (runs - 1), (double)below / runs};
  }
  return out;
}

WlsFit wls_slope(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& var) {
  if (x.size() != y.size() || x.size() != var.size() || x.size() < 3)
    throw ConfigError("wls_slope: need >= 3 points with matching variances");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(var[i] > 0.0)) throw ConfigError("wls_slope: variances must be > 0");
    double w = 1.0 / var[i];
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  double det = sw * sxx - sx * sx;
  WlsFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  fit.slope_se = std::sqrt(sw / det);
  return fit;
}

GrowthCheck growth_check(const std::vector<double>& regret,
                         const std::vector<double>& se) {
  if (regret.size() != se.size() || regret.size() < 3)
    throw ConfigError("growth_check: need >= 3 grid points");
  GrowthCheck gc;
  for (std::size_t i = 0; i + 1 < regret.size(); ++i)
    gc.diffs.push_back(regret[i + 1] - regret[i]);
  for (std::size_t i = 0; i + 1 < gc.diffs.size(); ++i) {
    double noise = 1.96 * std::sqrt(se[i] * se[i] + 4.0 * se[i + 1] * se[i + 1] +
                                    se[i + 2] * se[i + 2]);
    double slack = noise + 1e-9 * (1.0 + std::abs(gc.diffs[i]));
    if (gc.diffs[i + 1] > gc.diffs[i] + slack) gc.nonincreasing = false;
  }
  return gc;
}

}  // namespace bcb
