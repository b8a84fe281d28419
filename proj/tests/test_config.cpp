#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcb/config.hpp"
#include "bcb/errors.hpp"
#include "bcb/instance.hpp"

using namespace bcb;

namespace {

std::string minimal_config(const std::string& extra_top = "",
                           const std::string& policies =
                               R"([{"kind": "alp"}, {"kind": "flp"}])") {
  return R"({
    "name": "mini",
    "instance": {
      "pi": [0.4, 0.6],
      "rewards": [[0.26666666666666666, 0.5333333333333333, 0.8],
                  [0.13333333333333333, 0.26666666666666666, 0.4]],
      "costs": "unit"
    },
    "rhos": [0.39],
    "horizons": [40, 80],
    "policies": )" +
         policies + R"(,
    "runs": 30,
    "seed": 4)" +
         extra_top + "\n}";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("presets parse, validate, and carry the pinned shapes") {
  CHECK(preset_names() == std::vector<std::string>{"two-context", "ten-context",
                                                   "tiny-dp", "het-demo"});
  for (const auto& name : preset_names()) {
    ExperimentConfig cfg = load_config(name);
    CHECK_NOTHROW(validate_config(cfg));
    CHECK(cfg.name == name);
    CHECK(cfg.runs >= 30);
  }

  ExperimentConfig two = load_config("two-context");
  CHECK(two.instance.J == 2);
  CHECK(two.instance.K == 3);
  CHECK(two.instance.pi == std::vector<Rat>{Rat(2, 5), Rat(3, 5)});
  CHECK(two.rhos == std::vector<Rat>{Rat(39, 100), Rat(2, 5), Rat(41, 100)});
  CHECK(two.horizons == std::vector<std::int64_t>{1000, 2000, 4000, 8000});
  CHECK(two.policies.size() == 6);
  CHECK(two.policies[0].label == "flp");
  CHECK(two.policies[4].label == "ucb-alp");
  CHECK(two.benchmark == Benchmark::FluidLp);

  ExperimentConfig ten = load_config("ten-context");
  CHECK(ten.instance.J == 10);
  CHECK(ten.instance.K == 5);
  // generated rewards: u_{j,k} = jk / (J K)
  CHECK(ten.instance.u[9][4] == 1.0);
  CHECK(ten.instance.u[0][0] == doctest::Approx(0.02).epsilon(1e-12));
  GapTable gap = build_gap_table(ten.instance);
  CHECK(gap.q[5] == Rat(1, 2));

  ExperimentConfig dp = load_config("tiny-dp");
  CHECK(dp.benchmark == Benchmark::Dp);

  ExperimentConfig het = load_config("het-demo");
  CHECK_FALSE(het.instance.unit_cost());
  CHECK(het.policies[2].label == "eps-first+clt");
  CHECK(het.policies[2].opt.explore_mode == ExploreMode::ConfidenceTest);

  CHECK_THROWS_AS(preset_text("nope"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("config files load from disk") {
  std::string path = "/tmp/bcb_test_config.json";
  {
    std::ofstream f(path);
    f << minimal_config();
  }
  ExperimentConfig cfg = load_config(path);
  CHECK(cfg.name == "mini");
  CHECK(cfg.horizons == std::vector<std::int64_t>{40, 80});
  CHECK(cfg.master_seed == 4);
  std::remove(path.c_str());
}

TEST_CASE("parse errors name the offending field") {
  auto message_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("(no error)");
  };

  CHECK(message_of("{ not json").find("config:") != std::string::npos);
  CHECK(message_of(R"({"instance": 3})").find("instance") != std::string::npos);
  CHECK(message_of(minimal_config(", \"typo\": 1"))
            .find("typo") != std::string::npos);

  std::string bad_policy = minimal_config("", R"([{"kind": "greedy"}])");
  CHECK(message_of(bad_policy).find("greedy") != std::string::npos);

  std::string freeze_misuse =
      minimal_config("", R"([{"kind": "alp", "freeze": "adaptive"}])");
  CHECK(message_of(freeze_misuse).find("freeze") != std::string::npos);

  std::string explore_misuse =
      minimal_config("", R"([{"kind": "alp", "explore": "clt"}])");
  CHECK(message_of(explore_misuse).find("explore") != std::string::npos);

  // generator form needs the action count; plain matrices reject it
  std::string gen = R"x({
    "instance": {"pi": [1.0], "rewards": "jk/(JK)", "costs": "unit"},
    "rhos": [0.5], "horizons": [10],
    "policies": [{"kind": "alp"}], "runs": 30
  })x";
  CHECK(message_of(gen).find("actions") != std::string::npos);
}

TEST_CASE("validation rejects incompatible setups") {
  auto cfg_with = [](const std::string& policies,
                     const std::string& extra = "") {
    return parse_config_text(minimal_config(extra, policies));
  };

  ExperimentConfig cfg = cfg_with("[]");
  CHECK_THROWS_WITH_AS(validate_config(cfg), "config: empty policy list",
                       ConfigError);

  cfg = cfg_with(R"([{"kind": "alp"}, {"kind": "alp"}])");
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);  // duplicate labels

  cfg = cfg_with(R"([{"kind": "alp", "label": "a"}, {"kind": "alp", "label": "b"}])");
  CHECK_NOTHROW(validate_config(cfg));

  cfg = cfg_with(R"([{"kind": "pb"}])");
  cfg.instance = make_unit_instance({Rat(1, 3), Rat(1, 3), Rat(1, 3)},
                                    {{0.9}, {0.5}, {0.1}},
                                    RewardFamily::Bernoulli);
  try {
    validate_config(cfg);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("pb") != std::string::npos);
    CHECK(std::string(e.what()).find("two contexts") != std::string::npos);
  }

  cfg = cfg_with(R"([{"kind": "ucb-alp"}])");
  cfg.instance.c[0][0] = Rat(2);
  try {
    validate_config(cfg);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unit costs") != std::string::npos);
  }

  cfg = cfg_with(R"([{"kind": "alp"}])");
  cfg.runs = 29;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = cfg_with(R"([{"kind": "alp"}])");
  cfg.horizons = {100, 100};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg.horizons = {100, 50};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = cfg_with(R"([{"kind": "alp"}])");
  cfg.rhos = {Rat(0)};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  // schedule problems surface at validation, not mid-run: the two-context
  // instance has tied efficiency ratios, so the formula length is undefined
  cfg = cfg_with(R"([{"kind": "eps-first"}])");
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  // dp benchmark needs integer budgets at every grid point
  cfg = cfg_with(R"([{"kind": "alp"}])");
  cfg.benchmark = Benchmark::Dp;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);  // 0.39 * 40 = 15.6
}

TEST_CASE("policy labels derive from options") {
  auto label = [](const std::string& spec) {
    std::string text = minimal_config("", "[" + spec + "]");
    return parse_config_text(text).policies[0].label;
  };
  CHECK(label(R"({"kind": "alp"})") == "alp");
  CHECK(label(R"({"kind": "ucb-alp", "known_rewards": true})") ==
        "ucb-alp+known-u");
  CHECK(label(R"({"kind": "ealp", "known_context_probs": true})") ==
        "ealp+known-pi");
  CHECK(label(R"({"kind": "ealp2", "freeze": {"delta": 0.1}})") == "ealp2+t1");
  CHECK(label(R"({"kind": "ealp2", "freeze": "adaptive"})") == "ealp2");
  CHECK(label(R"({"kind": "eps-first", "explore": {"rounds": 50}})") ==
        "eps-first+fixed50");
  CHECK(label(R"({"kind": "eps-first", "explore": "clt"})") == "eps-first+clt");
  CHECK(label(R"({"kind": "eps-first", "explore": "formula", "margin": 0.25})") ==
        "eps-first");
  CHECK(label(R"({"kind": "alp", "label": "mine"})") == "mine");
}

TEST_CASE("doubles survive the report format") {
  for (double x : {0.1, 1.0 / 3.0, 0.39, 312.00000000000006, 1e-17, 0.0,
                   123456789.123456789}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(std::strtod(format_double(-x).c_str(), nullptr) == -x);
  }
}

TEST_CASE("experiment rows follow policy-rho-horizon order") {
  ExperimentConfig cfg = parse_config_text(minimal_config());
  cfg.threads = 2;
  std::vector<ResultRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 4);  // 2 policies x 1 rho x 2 horizons
  CHECK(rows[0].policy == "alp");
  CHECK(rows[0].T == 40);
  CHECK(rows[0].checkpoint == 0);
  CHECK(rows[1].policy == "alp");
  CHECK(rows[1].T == 80);
  CHECK(rows[1].checkpoint == 1);
  CHECK(rows[2].policy == "flp");
  CHECK(rows[2].B == Rat(39, 100) * Rat(40));
  CHECK(rows[0].runs == 30);
  CHECK(rows[0].seed == 4);
}

TEST_CASE("csv output reparses losslessly") {
  ExperimentConfig cfg = parse_config_text(minimal_config());
  std::vector<ResultRow> rows = run_experiment(cfg);
  std::string csv = render_csv(rows);

  auto table = parse_csv(csv);
  REQUIRE(table.size() == rows.size() + 1);
  CHECK(table[0] == parse_csv(std::string(kCsvHeader) + "\n")[0]);
  REQUIRE(table[0].size() == 11);

  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& cells = table[i + 1];
    REQUIRE(cells.size() == 11);
    CHECK(cells[0] == rows[i].policy);
    CHECK(std::stoll(cells[1]) == rows[i].T);
    CHECK(std::strtod(cells[2].c_str(), nullptr) == rows[i].B.to_double());
    CHECK(std::strtod(cells[3].c_str(), nullptr) == rows[i].rho.to_double());
    CHECK(std::stoi(cells[4]) == rows[i].runs);
    CHECK(std::strtod(cells[5].c_str(), nullptr) == rows[i].rep.mean_reward);
    CHECK(std::strtod(cells[6].c_str(), nullptr) ==
          rows[i].rep.benchmark_value);
    CHECK(std::strtod(cells[7].c_str(), nullptr) == rows[i].rep.regret_mean);
    CHECK(std::strtod(cells[8].c_str(), nullptr) == rows[i].rep.regret_ci95);
    CHECK(std::stoull(cells[9]) == rows[i].seed);
    CHECK(std::stoi(cells[10]) == rows[i].checkpoint);
  }

  // a rerun of the same config renders the identical byte stream
  CHECK(render_csv(run_experiment(cfg)) == csv);
}

TEST_CASE("json output carries the same rows") {
  ExperimentConfig cfg = parse_config_text(minimal_config());
  std::vector<ResultRow> rows = run_experiment(cfg);
  nlohmann::json out = nlohmann::json::parse(render_json(cfg, rows));
  CHECK(out["name"] == "mini");
  CHECK(out["benchmark"] == "lp");
  REQUIRE(out["results"].size() == rows.size());
  CHECK(out["results"][0]["policy"] == "alp");
  CHECK(out["results"][0]["T"] == 40);
  CHECK(out["results"][0]["mean_reward"].get<double>() ==
        rows[0].rep.mean_reward);
}
