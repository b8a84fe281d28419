#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "bcb/bounds.hpp"
#include "bcb/config.hpp"
#include "bcb/dp.hpp"
#include "bcb/errors.hpp"
#include "bcb/harness.hpp"
#include "bcb/het_lp.hpp"
#include "bcb/unit_lp.hpp"

namespace py = pybind11;

namespace {

using namespace bcb;

ProblemInstance make_instance(
    const std::vector<double>& pi, const std::vector<std::vector<double>>& u,
    const std::optional<std::vector<std::vector<double>>>& costs,
    const std::string& family) {
  ProblemInstance inst;
  inst.J = (int)pi.size();
  inst.K = u.empty() ? 0 : (int)u[0].size();
  for (double p : pi) {
    inst.pi.push_back(Rat::from_decimal(p));
    inst.pi_d.push_back(inst.pi.back().to_double());
  }
  inst.u = u;
  if (costs) {
    for (const auto& row : *costs) {
      std::vector<Rat> r;
      for (double c : row) r.push_back(Rat::from_decimal(c));
      inst.c.push_back(std::move(r));
    }
  } else {
    inst.c.assign(inst.J, std::vector<Rat>(inst.K, Rat(1)));
  }
  if (family == "bernoulli")
    inst.family = RewardFamily::Bernoulli;
  else if (family == "deterministic")
    inst.family = RewardFamily::Deterministic;
  else
    throw ConfigError("family must be bernoulli or deterministic");
  inst.validate();
  return inst;
}

PolicyOptions options_from(bool known_rewards, bool known_context_probs,
                           const std::optional<double>& freeze_delta,
                           const std::string& explore,
                           const std::optional<std::int64_t>& explore_rounds,
                           double margin) {
  PolicyOptions opt;
  opt.known_rewards = known_rewards;
  opt.known_context_probs = known_context_probs;
  if (freeze_delta) {
    opt.freeze_mode = FreezeMode::KnownDelta;
    opt.freeze_delta = *freeze_delta;
  }
  if (explore_rounds) {
    opt.explore_mode = ExploreMode::Fixed;
    opt.explore_rounds = *explore_rounds;
  } else if (explore == "clt") {
    opt.explore_mode = ExploreMode::ConfidenceTest;
  } else if (explore != "formula") {
    throw ConfigError("explore must be formula or clt");
  }
  opt.explore_margin = margin;
  return opt;
}

py::dict regret_dict(const RegretReport& rep) {
  py::dict d;
  d["benchmark"] = rep.benchmark_value;
  d["mean_reward"] = rep.mean_reward;
  d["regret_mean"] = rep.regret_mean;
  d["regret_se"] = rep.regret_se;
  d["regret_ci95"] = rep.regret_ci95;
  d["forced_dummy"] = rep.forced_dummy;
  d["clamped_runs"] = rep.clamped_runs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "budgeted contextual bandit policies (native core)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_RuntimeError);

  py::class_<ProblemInstance>(m, "Instance")
      .def_readonly("J", &ProblemInstance::J)
      .def_readonly("K", &ProblemInstance::K)
      .def_property_readonly(
          "pi", [](const ProblemInstance& inst) { return inst.pi_d; })
      .def_readonly("u", &ProblemInstance::u)
      .def("unit_cost", &ProblemInstance::unit_cost);

  m.def("make_instance", &make_instance, py::arg("pi"), py::arg("rewards"),
        py::arg("costs") = std::nullopt, py::arg("family") = "bernoulli",
        "Build an instance; probabilities and costs are snapped to exact "
        "rationals with denominator 10^6.");

  m.def(
      "lp_value",
      [](const ProblemInstance& inst, double rho) {
        Rat r = Rat::from_decimal(rho);
        return inst.unit_cost()
                   ? single_round_value(build_gap_table(inst), r)
                   : het_single_round_value(inst, r);
      },
      py::arg("instance"), py::arg("rho"),
      "Optimal single-round expected reward at average budget rate rho.");

  m.def(
      "upper_bound",
      [](const ProblemInstance& inst, std::int64_t T, double B) {
        Rat b = Rat::from_decimal(B);
        return inst.unit_cost() ? upper_bound(inst, T, b)
                                : het_upper_bound(inst, T, b);
      },
      py::arg("instance"), py::arg("T"), py::arg("B"),
      "T times the single-round optimum at rho = B/T.");

  m.def(
      "unit_lp",
      [](const ProblemInstance& inst, double rho) {
        UnitLpSolution s =
            unit_lp_solve(build_gap_table(inst), Rat::from_decimal(rho));
        py::dict d;
        d["threshold"] = s.threshold;
        d["frac"] = s.frac.to_double();
        std::vector<double> p;
        for (const auto& x : s.p) p.push_back(x.to_double());
        d["p"] = p;
        d["value"] = s.value;
        return d;
      },
      py::arg("instance"), py::arg("rho"),
      "Ranked service probabilities for unit costs.");

  m.def(
      "het_lp",
      [](const ProblemInstance& inst, double rho) {
        HetLpSolution s = het_lp_solve(inst, Rat::from_decimal(rho));
        py::dict d;
        d["candidates"] = s.candidates;
        std::vector<std::vector<double>> p(s.p.size());
        for (size_t j = 0; j < s.p.size(); ++j)
          for (const auto& x : s.p[j]) p[j].push_back(x.to_double());
        d["p"] = p;
        d["value"] = s.value;
        d["spend"] = s.spend.to_double();
        return d;
      },
      py::arg("instance"), py::arg("rho"),
      "Per-action probabilities for arbitrary costs.");

  m.def(
      "dp_value",
      [](const ProblemInstance& inst, std::int64_t T, double B) {
        return dp_solve(inst, T, Rat::from_decimal(B)).value();
      },
      py::arg("instance"), py::arg("T"), py::arg("B"),
      "Exact optimum for unit costs and an integer budget.");

  m.def(
      "bounds",
      [](const ProblemInstance& inst, double rho, std::int64_t T) {
        BoundReport r = bound_ucb_alp(inst, Rat::from_decimal(rho));
        py::dict d;
        d["boundary"] = r.boundary;
        d["threshold"] = r.threshold;
        d["delta"] = r.delta;
        d["spread"] = r.spread;
        d["theta_o"] = r.theta_o;
        d["const_term"] = r.const_term;
        d["theta_a"] = r.theta_a;
        d["theta_c"] = r.theta_c;
        d["alp_bound"] = alp_regret_bound(r, T);
        d["ucb_alp_bound"] = ucb_alp_regret_bound(r, T);
        return d;
      },
      py::arg("instance"), py::arg("rho"), py::arg("T"),
      "Analytic regret guarantees evaluated at horizon T.");

  m.def(
      "estimate_regret",
      [](const ProblemInstance& inst, const std::string& policy,
         std::int64_t T, double B, int runs, std::uint64_t seed, int threads,
         const std::string& benchmark, bool known_rewards,
         bool known_context_probs, const std::optional<double>& freeze_delta,
         const std::string& explore,
         const std::optional<std::int64_t>& explore_rounds, double margin) {
        RegretRequest req;
        req.kind = policy_from_id(policy);
        req.opt = options_from(known_rewards, known_context_probs,
                               freeze_delta, explore, explore_rounds, margin);
        req.T = T;
        req.B = Rat::from_decimal(B);
        req.runs = runs;
        req.master_seed = seed;
        if (benchmark == "dp")
          req.benchmark = Benchmark::Dp;
        else if (benchmark != "lp")
          throw ConfigError("benchmark must be lp or dp");
        req.threads = threads;
        RegretReport rep;
        {
          py::gil_scoped_release release;
          rep = estimate_regret(inst, req);
        }
        return regret_dict(rep);
      },
      py::arg("instance"), py::arg("policy"), py::arg("T"), py::arg("B"),
      py::arg("runs"), py::arg("seed") = 0, py::arg("threads") = 1,
      py::arg("benchmark") = "lp", py::arg("known_rewards") = false,
      py::arg("known_context_probs") = false,
      py::arg("freeze_delta") = std::nullopt, py::arg("explore") = "formula",
      py::arg("explore_rounds") = std::nullopt, py::arg("margin") = 0.5,
      "Monte-Carlo regret of one policy at one (T, B) point.");

  m.def("policy_ids", [] {
    std::vector<std::string> out;
    for (PolicyKind k :
         {PolicyKind::Alp, PolicyKind::Flp, PolicyKind::Pb, PolicyKind::UcbAlp,
          PolicyKind::UcbFlp, PolicyKind::UcbPb, PolicyKind::Ealp,
          PolicyKind::UcbEalp, PolicyKind::Ealp2, PolicyKind::EpsFirst})
      out.push_back(policy_id(k));
    return out;
  });

  m.def("preset_names", &preset_names);
  m.def("preset_text", &preset_text, py::arg("name"));

  m.def(
      "run_config",
      [](const std::string& text, int runs_override, std::uint64_t seed,
         bool seed_given, int threads) {
        ExperimentConfig cfg = parse_config_text(text);
        if (runs_override > 0) cfg.runs = runs_override;
        if (seed_given) cfg.master_seed = seed;
        if (threads > 0) cfg.threads = threads;
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg);
        }
        return render_csv(rows);
      },
      py::arg("text"), py::arg("runs") = 0, py::arg("seed") = 0,
      py::arg("seed_given") = false, py::arg("threads") = 0,
      "Run a JSON experiment config and return the CSV result table.");
}
