#include "bcb/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bcb/dp.hpp"
#include "bcb/errors.hpp"

namespace bcb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

Rat rat_of(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
  if (v.is_number_float()) return Rat::from_decimal(v.get<double>());
  fail(where, "expected a number");
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) fail(where, "unknown field \"" + it.key() + "\"");
  }
}

ProblemInstance parse_instance(const json& in) {
  if (!in.is_object()) fail("instance", "expected an object");
  expect_keys(in, "instance",
              {"pi", "rewards", "actions", "costs", "reward_family"});
  ProblemInstance inst;
  if (!in.contains("pi") || !in["pi"].is_array())
    fail("instance.pi", "expected an array of probabilities");
  for (const auto& v : in["pi"]) inst.pi.push_back(rat_of(v, "instance.pi"));
  inst.J = (int)inst.pi.size();
  for (const auto& r : inst.pi) inst.pi_d.push_back(r.to_double());

  if (!in.contains("rewards")) fail("instance.rewards", "missing");
  const json& rw = in["rewards"];
  if (rw.is_string()) {
    if (rw.get<std::string>() != "jk/(JK)")
      fail("instance.rewards",
           "unknown generator (only \"jk/(JK)\" is supported)");
    if (!in.contains("actions") || !in["actions"].is_number_integer())
      fail("instance.actions", "generator form needs an action count");
    inst.K = in["actions"].get<int>();
    if (inst.K < 1) fail("instance.actions", "must be >= 1");
    inst.u.assign(inst.J, std::vector<double>(inst.K));
    for (int j = 1; j <= inst.J; ++j)
      for (int k = 1; k <= inst.K; ++k)
        inst.u[j - 1][k - 1] = (double)(j * k) / (double)(inst.J * inst.K);
  } else if (rw.is_array()) {
    if (in.contains("actions"))
      fail("instance.actions", "only valid with the reward generator");
    for (const auto& row : rw) {
      if (!row.is_array()) fail("instance.rewards", "expected rows of numbers");
      std::vector<double> r;
      for (const auto& v : row) {
        if (!v.is_number()) fail("instance.rewards", "expected a number");
        r.push_back(v.get<double>());
      }
      inst.u.push_back(std::move(r));
    }
    inst.K = inst.u.empty() ? 0 : (int)inst.u[0].size();
  } else {
    fail("instance.rewards", "expected a matrix or \"jk/(JK)\"");
  }

  if (!in.contains("costs")) fail("instance.costs", "missing");
  const json& cs = in["costs"];
  if (cs.is_string()) {
    if (cs.get<std::string>() != "unit")
      fail("instance.costs", "unknown keyword (only \"unit\")");
    inst.c.assign(inst.J, std::vector<Rat>(inst.K, Rat(1)));
  } else if (cs.is_array()) {
    for (const auto& row : cs) {
      if (!row.is_array()) fail("instance.costs", "expected rows of numbers");
      std::vector<Rat> r;
      for (const auto& v : row) r.push_back(rat_of(v, "instance.costs"));
      inst.c.push_back(std::move(r));
    }
  } else {
    fail("instance.costs", "expected a matrix or \"unit\"");
  }

  if (in.contains("reward_family")) {
    std::string f = in["reward_family"].get<std::string>();
    if (f == "bernoulli")
      inst.family = RewardFamily::Bernoulli;
    else if (f == "deterministic")
      inst.family = RewardFamily::Deterministic;
    else
      fail("instance.reward_family", "expected bernoulli or deterministic");
  }
  inst.validate();
  return inst;
}

PolicySpec parse_policy(const json& in, size_t idx) {
  std::string where = "policies[" + std::to_string(idx) + "]";
  if (!in.is_object() || !in.contains("kind"))
    fail(where, "expected an object with a \"kind\"");
  expect_keys(in, where,
              {"kind", "label", "known_rewards", "known_context_probs",
               "freeze", "explore", "margin"});
  PolicySpec ps;
  ps.kind = policy_from_id(in["kind"].get<std::string>());
  if (in.contains("label")) ps.label = in["label"].get<std::string>();
  if (in.contains("known_rewards"))
    ps.opt.known_rewards = in["known_rewards"].get<bool>();
  if (in.contains("known_context_probs"))
    ps.opt.known_context_probs = in["known_context_probs"].get<bool>();
  if (in.contains("freeze")) {
    if (ps.kind != PolicyKind::Ealp2)
      fail(where, "\"freeze\" only applies to ealp2");
    const json& fz = in["freeze"];
    if (fz.is_string() && fz.get<std::string>() == "adaptive") {
      ps.opt.freeze_mode = FreezeMode::Adaptive;
    } else if (fz.is_object() && fz.contains("delta")) {
      ps.opt.freeze_mode = FreezeMode::KnownDelta;
      ps.opt.freeze_delta = fz["delta"].get<double>();
    } else {
      fail(where, "\"freeze\" must be \"adaptive\" or {\"delta\": d}");
    }
  }
  if (in.contains("explore")) {
    if (ps.kind != PolicyKind::EpsFirst)
      fail(where, "\"explore\" only applies to eps-first");
    const json& ex = in["explore"];
    if (ex.is_string() && ex.get<std::string>() == "formula") {
      ps.opt.explore_mode = ExploreMode::Formula;
    } else if (ex.is_string() && ex.get<std::string>() == "clt") {
      ps.opt.explore_mode = ExploreMode::ConfidenceTest;
    } else if (ex.is_object() && ex.contains("rounds")) {
      ps.opt.explore_mode = ExploreMode::Fixed;
      ps.opt.explore_rounds = ex["rounds"].get<std::int64_t>();
      if (ps.opt.explore_rounds < 0) fail(where, "explore rounds must be >= 0");
    } else {
      fail(where, "\"explore\" must be \"formula\", \"clt\" or {\"rounds\": n}");
    }
  }
  if (in.contains("margin")) {
    if (ps.kind != PolicyKind::EpsFirst)
      fail(where, "\"margin\" only applies to eps-first");
    ps.opt.explore_margin = in["margin"].get<double>();
  }
  if (ps.label.empty()) ps.label = default_label(ps);
  return ps;
}

struct Preset {
  const char* name;
  const char* text;
};

const Preset kPresets[] = {
    {"two-context", R"JSON({
  "name": "two-context",
  "instance": {
    "pi": [0.4, 0.6],
    "rewards": [[0.26666666666666666, 0.5333333333333333, 0.8],
                [0.13333333333333333, 0.26666666666666666, 0.4]],
    "costs": "unit",
    "reward_family": "bernoulli"
  },
  "rhos": [0.39, 0.4, 0.41],
  "horizons": [1000, 2000, 4000, 8000],
  "policies": [
    {"kind": "flp"}, {"kind": "alp"}, {"kind": "ealp"},
    {"kind": "ucb-flp"}, {"kind": "ucb-alp"}, {"kind": "ucb-ealp"}
  ],
  "runs": 200,
  "seed": 20260819
})JSON"},
    {"ten-context", R"JSON({
  "name": "ten-context",
  "instance": {
    "pi": [0.025, 0.05, 0.075, 0.15, 0.2, 0.2, 0.15, 0.075, 0.05, 0.025],
    "rewards": "jk/(JK)",
    "actions": 5,
    "costs": "unit",
    "reward_family": "bernoulli"
  },
  "rhos": [0.49, 0.5, 0.51],
  "horizons": [1000, 2000, 4000, 8000],
  "policies": [{"kind": "alp"}, {"kind": "ucb-alp"}, {"kind": "ucb-ealp"}],
  "runs": 200,
  "seed": 20260819
})JSON"},
    {"tiny-dp", R"JSON({
  "name": "tiny-dp",
  "instance": {
    "pi": [0.4, 0.6],
    "rewards": [[0.26666666666666666, 0.5333333333333333, 0.8],
                [0.13333333333333333, 0.26666666666666666, 0.4]],
    "costs": "unit",
    "reward_family": "bernoulli"
  },
  "rhos": [0.5],
  "horizons": [20, 40],
  "policies": [{"kind": "alp"}, {"kind": "flp"}, {"kind": "pb"}],
  "runs": 2000,
  "seed": 7,
  "benchmark": "dp"
})JSON"},
    {"het-demo", R"JSON({
  "name": "het-demo",
  "instance": {
    "pi": [0.5, 0.5],
    "rewards": [[0.2, 0.5, 0.85], [0.29, 0.5, 0.62]],
    "costs": [[1, 2, 3], [1, 3, 4]],
    "reward_family": "bernoulli"
  },
  "rhos": [0.5, 1.0],
  "horizons": [500, 1000, 2000],
  "policies": [
    {"kind": "alp"}, {"kind": "flp"}, {"kind": "eps-first", "explore": "clt"}
  ],
  "runs": 200,
  "seed": 11
})JSON"},
};

}  // namespace

std::string default_label(const PolicySpec& spec) {
  std::string s = policy_id(spec.kind);
  if (spec.opt.known_rewards) s += "+known-u";
  if (spec.opt.known_context_probs) s += "+known-pi";
  if (spec.kind == PolicyKind::Ealp2 &&
      spec.opt.freeze_mode == FreezeMode::KnownDelta)
    s += "+t1";
  if (spec.kind == PolicyKind::EpsFirst) {
    switch (spec.opt.explore_mode) {
      case ExploreMode::Formula:
        break;
      case ExploreMode::Fixed:
        s += "+fixed" + std::to_string(spec.opt.explore_rounds);
        break;
      case ExploreMode::ConfidenceTest:
        s += "+clt";
        break;
    }
  }
  return s;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!in.is_object()) throw ConfigError("config: expected a JSON object");
  expect_keys(in, "top level",
              {"name", "instance", "rhos", "horizons", "policies", "runs",
               "seed", "benchmark", "threads", "output"});
  ExperimentConfig cfg;
  if (in.contains("name")) cfg.name = in["name"].get<std::string>();
  if (!in.contains("instance")) fail("instance", "missing");
  cfg.instance = parse_instance(in["instance"]);

  if (!in.contains("rhos") || !in["rhos"].is_array() || in["rhos"].empty())
    fail("rhos", "expected a non-empty array");
  for (const auto& v : in["rhos"]) cfg.rhos.push_back(rat_of(v, "rhos"));

  if (!in.contains("horizons") || !in["horizons"].is_array() ||
      in["horizons"].empty())
    fail("horizons", "expected a non-empty array");
  for (const auto& v : in["horizons"]) {
    if (!v.is_number_integer()) fail("horizons", "expected integers");
    cfg.horizons.push_back(v.get<std::int64_t>());
  }

  if (!in.contains("policies") || !in["policies"].is_array())
    fail("policies", "expected an array");
  size_t idx = 0;
  for (const auto& p : in["policies"]) cfg.policies.push_back(parse_policy(p, idx++));

  if (!in.contains("runs") || !in["runs"].is_number_integer())
    fail("runs", "expected an integer");
  cfg.runs = in["runs"].get<int>();
  if (in.contains("seed")) cfg.master_seed = in["seed"].get<std::uint64_t>();
  if (in.contains("benchmark")) {
    std::string b = in["benchmark"].get<std::string>();
    if (b == "lp")
      cfg.benchmark = Benchmark::FluidLp;
    else if (b == "dp")
      cfg.benchmark = Benchmark::Dp;
    else
      fail("benchmark", "expected lp or dp");
  }
  if (in.contains("threads")) {
    cfg.threads = in["threads"].get<int>();
    if (cfg.threads < 1) fail("threads", "must be >= 1");
  }
  if (in.contains("output")) {
    const json& out = in["output"];
    if (!out.is_object()) fail("output", "expected an object");
    expect_keys(out, "output", {"path", "format"});
    if (out.contains("path")) cfg.out_path = out["path"].get<std::string>();
    if (out.contains("format")) cfg.format = out["format"].get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& name_or_path) {
  for (const auto& p : kPresets)
    if (name_or_path == p.name) return parse_config_text(p.text);
  std::ifstream f(name_or_path);
  if (!f) throw ConfigError("cannot open config file or preset: " + name_or_path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  cfg.instance.validate();
  if (cfg.policies.empty()) throw ConfigError("config: empty policy list");
  if (cfg.runs < 30)
    throw ConfigError(
        "config: runs must be >= 30 (reported intervals need that many)");
  if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("config: format must be csv or json");

  for (const auto& rho : cfg.rhos)
    if (!(rho > Rat(0))) throw ConfigError("config: every rho must be > 0");
  std::int64_t prev = 0;
  for (auto T : cfg.horizons) {
    if (T < 1) throw ConfigError("config: horizons must be >= 1");
    if (T <= prev)
      throw ConfigError("config: horizons must be strictly increasing");
    prev = T;
  }

  const bool unit = cfg.instance.unit_cost();
  std::set<std::string> labels;
  for (const auto& ps : cfg.policies) {
    if (!labels.insert(ps.label).second)
      throw ConfigError("config: duplicate policy label \"" + ps.label +
                        "\" (set explicit labels)");
    if (policy_requires_unit_cost(ps.kind) && !unit)
      throw ConfigError(std::string("config: policy ") + policy_id(ps.kind) +
                        " needs unit costs");
    if (policy_requires_two_contexts(ps.kind) && cfg.instance.J != 2)
      throw ConfigError(std::string("config: policy ") + policy_id(ps.kind) +
                        " needs exactly two contexts");
    // Surface per-policy schedule errors (bad margins, tied efficiency
    // ratios, missing delta) before any episode runs.
    for (auto T : cfg.horizons)
      make_policy_state(ps.kind, ps.opt, cfg.instance, T,
                        cfg.rhos.front() * Rat(T));
  }

  if (cfg.benchmark == Benchmark::Dp) {
    for (const auto& rho : cfg.rhos)
      for (auto T : cfg.horizons) dp_solve(cfg.instance, T, rho * Rat(T));
  }
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.push_back(p.name);
  return out;
}

std::string preset_text(const std::string& name) {
  for (const auto& p : kPresets)
    if (name == p.name) return p.text;
  throw ConfigError("unknown preset: " + name);
}

}  // namespace bcb
