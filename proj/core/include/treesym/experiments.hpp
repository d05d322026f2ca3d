#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "treesym/nielsen.hpp"

namespace treesym {

// Shared experiment configuration. Every field is echoed into the report so
// a run is reproducible from its own summary.
struct ExpConfig {
  int k = 3;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;  // Monte-Carlo sample size for statistics
  int trials = 50;                 // per slice / per scenario
  int depth = 2;                   // ball depth for density and quotients
  int jobs = 1;                    // trial-level parallelism
  TrichotomyConfig trichotomy;
};

// Deterministic per-trial seed stream.
std::uint64_t trial_seed(const ExpConfig& cfg, std::uint64_t trial);

struct ExperimentReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // one row per trial/case
  std::string summary_json;                    // {name, config, counts, statistics, pass}
  bool pass = false;

  std::string csv() const;
};

ExperimentReport exp_uniformity(const ExpConfig& cfg);
ExperimentReport exp_independence(const ExpConfig& cfg);
ExperimentReport exp_techno(const ExpConfig& cfg);
ExperimentReport exp_densepoint(const ExpConfig& cfg);
ExperimentReport exp_trichotomy_montecarlo(const ExpConfig& cfg);
ExperimentReport exp_product_trees(const ExpConfig& cfg);
ExperimentReport exp_stabilizer_nontrivial(const ExpConfig& cfg);

using ExperimentFn = ExperimentReport (*)(const ExpConfig&);
const std::map<std::string, ExperimentFn>& experiment_registry();

// Writes <name>.csv and <name>.json under out_dir.
void write_report(const ExperimentReport& report, const std::string& out_dir);

}  // namespace treesym
