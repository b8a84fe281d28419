#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bcb/bounds.hpp"
#include "bcb/config.hpp"
#include "bcb/errors.hpp"

namespace {

void apply_overrides(bcb::ExperimentConfig& cfg, const CLI::Option* seed_opt,
                     std::uint64_t seed, const CLI::Option* runs_opt, int runs,
                     const CLI::Option* threads_opt, int threads,
                     const std::string& out, const std::string& format) {
  if (seed_opt->count()) cfg.master_seed = seed;
  if (runs_opt->count()) cfg.runs = runs;
  if (threads_opt->count()) cfg.threads = threads;
  if (!out.empty()) cfg.out_path = out;
  if (!format.empty()) cfg.format = format;
}

void emit(const bcb::ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw bcb::ConfigError("cannot write output file: " + cfg.out_path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"budgeted contextual bandit policies: benchmark runner"};
  app.require_subcommand(1);

  std::string cfg_arg;
  std::uint64_t seed = 0;
  int runs = 0;
  int threads = 0;
  std::string out_path;
  std::string format;
  std::string preset_name;

  auto* run_cmd =
      app.add_subcommand("run", "run an experiment (config file or preset)");
  run_cmd->add_option("config", cfg_arg, "config file path or preset name")
      ->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed override");
  auto* runs_opt = run_cmd->add_option("--runs", runs, "run count override");
  auto* threads_opt =
      run_cmd->add_option("--threads", threads, "worker thread count");
  run_cmd->add_option("--out", out_path, "output path (default stdout)");
  run_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* val_cmd = app.add_subcommand(
      "validate", "check a config or preset without running it");
  val_cmd->add_option("config", cfg_arg, "config file path or preset name")
      ->required();

  auto* presets_cmd =
      app.add_subcommand("presets", "list built-in presets (or show one)");
  presets_cmd->add_option("name", preset_name,
                          "print this preset's config text");

  auto* bounds_cmd = app.add_subcommand(
      "bounds", "print analytic regret bounds for a config's budget rates");
  bounds_cmd->add_option("config", cfg_arg, "config file path or preset name")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config problems
  }

  try {
    if (run_cmd->parsed()) {
      bcb::ExperimentConfig cfg = bcb::load_config(cfg_arg);
      apply_overrides(cfg, seed_opt, seed, runs_opt, runs, threads_opt,
                      threads, out_path, format);
      std::vector<bcb::ResultRow> rows = bcb::run_experiment(cfg);
      emit(cfg, cfg.format == "json" ? bcb::render_json(cfg, rows)
                                     : bcb::render_csv(rows));
    } else if (val_cmd->parsed()) {
      bcb::ExperimentConfig cfg = bcb::load_config(cfg_arg);
      bcb::validate_config(cfg);
      std::cout << "ok: " << (cfg.name.empty() ? cfg_arg : cfg.name) << "\n";
    } else if (presets_cmd->parsed()) {
      if (!preset_name.empty()) {
        std::cout << bcb::preset_text(preset_name) << "\n";
      } else {
        for (const auto& name : bcb::preset_names()) std::cout << name << "\n";
      }
    } else if (bounds_cmd->parsed()) {
      bcb::ExperimentConfig cfg = bcb::load_config(cfg_arg);
      std::int64_t tmax = cfg.horizons.back();
      std::cout << "rho,boundary,threshold,delta,spread,theta_o,const_term,"
                   "theta_a,theta_c,alp_bound_tmax,ucb_alp_bound_tmax\n";
      for (const auto& rho : cfg.rhos) {
        bcb::BoundReport r = bcb::bound_ucb_alp(cfg.instance, rho);
        std::cout << bcb::format_double(r.rho) << ','
                  << (r.boundary ? "yes" : "no") << ',' << r.threshold << ','
                  << bcb::format_double(r.delta) << ','
                  << bcb::format_double(r.spread) << ','
                  << bcb::format_double(r.theta_o) << ','
                  << bcb::format_double(r.const_term) << ','
                  << bcb::format_double(r.theta_a) << ','
                  << bcb::format_double(r.theta_c) << ','
                  << bcb::format_double(bcb::alp_regret_bound(r, tmax)) << ','
                  << bcb::format_double(bcb::ucb_alp_regret_bound(r, tmax))
                  << "\n";
      }
    }
  } catch (const bcb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bcb::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
