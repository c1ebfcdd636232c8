#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nerb/config.hpp"

namespace nerb {

// One metric observation (or aggregate / failure marker). `status` is one of
// "ok", "mean", "ci95" (value = half-width), "failed", "skipped"; failures
// and skips carry the reason in `note`.
struct ResultRow {
  std::string task;
  std::string dataset;
  std::string method;
  std::string attack;
  double budget = 0.0;
  double n_tr = 0.0;     // 0 for network reconstruction
  int shuffle = -1;      // -1 for aggregates / NR
  int repetition = -1;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  double wall_time_s = 0.0;
  long peak_rss_kb = 0;
  std::string status = "ok";
  std::string note;

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  bool any_failed = false;
  std::map<std::string, std::string> dataset_checksums;  // name -> sha256
};

// Executes the full (dataset x attack x budget x repetition x method) grid.
// Per-cell seeds derive from cfg.master_seed and the cell coordinates;
// deterministic attacks build the attacked graph once per (dataset, attack,
// budget) while embeddings and evaluation still run per repetition.
// Cell failures become "failed" rows and the run continues.
ResultTable run_experiment(const ExperimentConfig& cfg,
                           const std::string& cache_dir = "");

// Appends mean and 95% CI rows (t-distribution over the shuffle x repetition
// samples) for every (dataset, method, attack, budget, n_tr, metric) group.
void append_aggregates(ResultTable& table);

// results.csv / results.json / manifest.json / resolved_config.ini under
// cfg.output_dir. Throws on an empty table or unwritable directory.
void emit_report(const ResultTable& table, const ExperimentConfig& cfg);

std::vector<ResultRow> parse_result_csv(const std::string& path);

struct ConstrainedDeletionSummary {
  double constrained_mean = 0.0;    // allow_disconnect = false
  double constrained_std = 0.0;
  double unconstrained_mean = 0.0;  // allow_disconnect = true
  double unconstrained_std = 0.0;
  double gap = 0.0;                 // constrained - unconstrained
  std::string formatted;            // "a ± b vs c ± d"
};

// Paired run of cfg with allow_disconnect=false then =true, restricted to the
// deletion attacks named in cfg (must include del_rand or del_deg); f1_micro
// pooled over all cells per condition.
ConstrainedDeletionSummary compare_constrained_deletion(
    const ExperimentConfig& cfg, const std::string& cache_dir = "");

}  // namespace nerb
