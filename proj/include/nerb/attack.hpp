#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nerb/graph.hpp"
#include "nerb/rng.hpp"

namespace nerb {

enum class AttackStrategy {
  kAddRand,
  kAddDeg,
  kAddPa,
  kAddDa,
  kAddDd,
  kAddCe,
  kDelRand,
  kDelDeg,
  kDelPa,
  kDelDa,
  kDelDd,
  kDelDi,
  kRewRand,
  kDice,
};

constexpr int kNumStrategies = 14;

const char* to_string(AttackStrategy s);
std::optional<AttackStrategy> attack_strategy_from_string(const std::string& name);
std::vector<AttackStrategy> all_strategies();

// Ranked deletions are a pure function of the input graph; everything else
// consumes the seed.
bool is_deterministic(AttackStrategy s);
bool requires_labels(AttackStrategy s);
bool is_deletion(AttackStrategy s);
bool is_addition(AttackStrategy s);

struct AttackSpec {
  AttackStrategy strategy = AttackStrategy::kAddRand;
  double budget = 0.0;  // fraction of M
  bool allow_disconnect = false;
  std::uint64_t seed = 0;
  MomentMode moment_mode = MomentMode::kLiteral;
  // del_rand degree condition evaluated on the current (partially attacked)
  // graph by default; true switches to pre-attack degrees.
  bool degree_check_on_original = false;
};

struct AttackLog {
  AttackStrategy strategy;
  std::uint64_t seed = 0;
  double budget = 0.0;
  std::size_t requested_changes = 0;
  std::size_t achieved_changes = 0;
  std::vector<Edge> added;
  std::vector<Edge> removed;
  std::string shortfall_reason;  // empty when the budget was met

  std::string to_json() const;
};

// round-half-up of budget * M; fixed here for reproducibility.
std::size_t requested_changes(double budget, std::size_t num_edges);

// Applies the attack to a copy of g; g itself is never modified.
// Label-based strategies (add_ce, del_di, dice) require labels.
// Budget shortfalls (candidate exhaustion) are logged, not thrown.
std::pair<Graph, AttackLog> apply_attack(const Graph& g,
                                         const LabelMap* labels,
                                         const AttackSpec& spec);

}  // namespace nerb
