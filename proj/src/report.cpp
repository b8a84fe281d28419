#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bcb/config.hpp"

namespace bcb {

const char* const kCsvHeader =
    "policy,T,B,rho,runs,mean_reward,benchmark,regret_mean,regret_ci95,seed,"
    "checkpoint";

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<ResultRow> rows;
  for (const auto& ps : cfg.policies) {
    for (const auto& rho : cfg.rhos) {
      for (size_t ci = 0; ci < cfg.horizons.size(); ++ci) {
        RegretRequest req;
        req.kind = ps.kind;
        req.opt = ps.opt;
        req.T = cfg.horizons[ci];
        req.B = rho * Rat(req.T);
        req.runs = cfg.runs;
        req.master_seed = cfg.master_seed;
        req.benchmark = cfg.benchmark;
        req.threads = cfg.threads;
        ResultRow row;
        row.policy = ps.label;
        row.T = req.T;
        row.B = req.B;
        row.rho = rho;
        row.runs = cfg.runs;
        row.rep = estimate_regret(cfg.instance, req);
        row.seed = cfg.master_seed;
        row.checkpoint = (int)ci;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string render_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << r.T << ',' << format_double(r.B.to_double())
        << ',' << format_double(r.rho.to_double()) << ',' << r.runs << ','
        << format_double(r.rep.mean_reward) << ','
        << format_double(r.rep.benchmark_value) << ','
        << format_double(r.rep.regret_mean) << ','
        << format_double(r.rep.regret_ci95) << ',' << r.seed << ','
        << r.checkpoint << "\n";
  }
  return out.str();
}

std::string render_json(const ExperimentConfig& cfg,
                        const std::vector<ResultRow>& rows) {
  nlohmann::json out;
  out["name"] = cfg.name;
  out["runs"] = cfg.runs;
  out["seed"] = cfg.master_seed;
  out["benchmark"] = cfg.benchmark == Benchmark::Dp ? "dp" : "lp";
  out["results"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["policy"] = r.policy;
    row["T"] = r.T;
    row["B"] = r.B.to_double();
    row["rho"] = r.rho.to_double();
    row["runs"] = r.runs;
    row["mean_reward"] = r.rep.mean_reward;
    row["benchmark"] = r.rep.benchmark_value;
    row["regret_mean"] = r.rep.regret_mean;
    row["regret_ci95"] = r.rep.regret_ci95;
    row["seed"] = r.seed;
    row["checkpoint"] = r.checkpoint;
    out["results"].push_back(std::move(row));
  }
  return out.dump(2) + "\n";
}

}  // namespace bcb
