#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcb/harness.hpp"
#include "bcb/instance.hpp"
#include "bcb/policies.hpp"

namespace bcb {

struct PolicySpec {
  PolicyKind kind = PolicyKind::Alp;
  PolicyOptions opt;
  std::string label;  // CSV policy column; derived from kind+options if empty
};

// One experiment file: a single instance swept over budget rates and
// horizons for a list of policies. The horizon list is also the checkpoint
// grid; result rows carry their index into it.
struct ExperimentConfig {
  std::string name;
  ProblemInstance instance;
  std::vector<Rat> rhos;
  std::vector<std::int64_t> horizons;
  std::vector<PolicySpec> policies;
  int runs = 0;
  std::uint64_t master_seed = 0;
  Benchmark benchmark = Benchmark::FluidLp;
  int threads = 1;
  std::string out_path;        // empty = stdout
  std::string format = "csv";  // csv | json
};

// Parses the JSON experiment format. Unknown fields are rejected so typos
// fail loudly. Throws ConfigError with the offending field in the message.
ExperimentConfig parse_config_text(const std::string& text);

// Accepts a preset name or a path to a config file.
ExperimentConfig load_config(const std::string& name_or_path);

// Full compatibility checks without running anything. Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);  // throws on unknown name

std::string default_label(const PolicySpec& spec);

// --- results ---

struct ResultRow {
  std::string policy;
  std::int64_t T = 0;
  Rat B{0};
  Rat rho{0};
  int runs = 0;
  RegretReport rep;
  std::uint64_t seed = 0;
  int checkpoint = 0;  // index into the horizon grid
};

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// 17 significant digits, round-trip safe for doubles.
std::string format_double(double x);

extern const char* const kCsvHeader;
std::string render_csv(const std::vector<ResultRow>& rows);
std::string render_json(const ExperimentConfig& cfg,
                        const std::vector<ResultRow>& rows);

}  // namespace bcb
