#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nerb/attack.hpp"
#include "nerb/dataset.hpp"
#include "nerb/embedding.hpp"

namespace nerb {

enum class Task { kNodeClassification, kNetworkReconstruction };

const char* to_string(Task t);

// A dataset reference: either a registry name or an inline SBM spec of the
// form "sbm:<size,size,...>:<p_in>:<p_out>".
struct DatasetRef {
  std::string name;
  bool is_sbm = false;
  SbmSpec sbm;
};

struct ExperimentConfig {
  Task task = Task::kNodeClassification;
  std::vector<DatasetRef> datasets;
  std::vector<MethodConfig> methods;
  std::vector<AttackStrategy> attacks;
  std::vector<double> budgets;
  std::vector<double> train_fractions{0.1, 0.5, 0.9};
  int shuffles = 3;
  int repetitions = 3;  // for non-deterministic attacks
  double pair_fraction = 0.05;
  bool allow_disconnect = false;
  MomentMode moment_mode = MomentMode::kLiteral;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  int jobs = 1;
};

// Thrown with every violation listed, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// INI-style config: sections [task], [data], [methods], [attacks],
// [budgets], [output]; unknown sections or keys are hard errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical echo of the fully resolved config (defaults filled in);
// re-parsing it yields the same configuration.
std::string resolved_config(const ExperimentConfig& cfg);

DatasetRef parse_dataset_ref(const std::string& token);

}  // namespace nerb
