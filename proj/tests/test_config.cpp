#include <sstream>
#include <string>

#include <doctest.h>

#include "nerb/config.hpp"

using namespace nerb;

namespace {

const char* kMinimal = R"(
[task]
type = node_classification

[data]
datasets = sbm:20,20:0.3:0.05

[methods]
methods = hope

[attacks]
attacks = add_rand

[budgets]
budgets = 0.2
)";

ExperimentConfig parse_str(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const ExperimentConfig cfg = parse_str(kMinimal);
  CHECK(cfg.task == Task::kNodeClassification);
  REQUIRE(cfg.datasets.size() == 1);
  CHECK(cfg.datasets[0].is_sbm);
  CHECK(cfg.datasets[0].sbm.block_sizes == std::vector<std::size_t>{20, 20});
  CHECK(cfg.datasets[0].sbm.p_in == 0.3);
  REQUIRE(cfg.methods.size() == 1);
  CHECK(cfg.methods[0].method == EmbedMethod::kHope);
  CHECK(cfg.methods[0].dim == 128);
  REQUIRE(cfg.attacks.size() == 1);
  CHECK(cfg.attacks[0] == AttackStrategy::kAddRand);
  CHECK(cfg.budgets == std::vector<double>{0.2});
  // defaults
  CHECK(cfg.train_fractions == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(cfg.shuffles == 3);
  CHECK(cfg.repetitions == 3);
  CHECK(cfg.pair_fraction == 0.05);
  CHECK_FALSE(cfg.allow_disconnect);
  CHECK(cfg.master_seed == 0);
}

TEST_CASE("unknown keys and sections are hard errors") {
  CHECK_THROWS_WITH_AS(
      parse_str(std::string(kMinimal) + "\n[task]\ntypo_key = 1\n"),
      doctest::Contains("typo_key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_str(std::string(kMinimal) + "\n[mystery]\nx = 1\n"),
                       doctest::Contains("mystery"), ConfigError);
}

TEST_CASE("deletion budget above one is a named validation error") {
  std::string text = kMinimal;
  text.replace(text.find("add_rand"), 8, "del_rand");
  text.replace(text.find("budgets = 0.2"), 13, "budgets = 1.5");
  CHECK_THROWS_WITH_AS(parse_str(text), doctest::Contains("budget"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_str(text), doctest::Contains("del_rand"),
                       ConfigError);
}

TEST_CASE("every violation is listed, not just the first") {
  std::string text = R"(
[task]
type = bogus_task
shuffles = 0

[data]
datasets =

[methods]
methods = not_a_method

[attacks]
attacks = del_rand

[budgets]
budgets = 1.5
)";
  try {
    parse_str(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus_task") != std::string::npos);
    CHECK(msg.find("shuffles") != std::string::npos);
    CHECK(msg.find("not_a_method") != std::string::npos);
    CHECK(msg.find("at least one") != std::string::npos);
    CHECK(msg.find("budget") != std::string::npos);
  }
}

TEST_CASE("parse errors carry the line number") {
  CHECK_THROWS_WITH_AS(parse_str("[task]\ntype node_classification\n"),
                       doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("all fourteen attacks parse into a full grid config") {
  std::string text = R"(
[task]
type = node_classification

[data]
datasets = citeseer

[methods]
methods = deepwalk node2vec hope netmf grarep

[attacks]
attacks = add_rand add_deg add_pa add_da add_dd add_ce del_rand del_deg del_pa del_da del_dd del_di rew_rand dice

[budgets]
budgets = 0.2
)";
  const ExperimentConfig cfg = parse_str(text);
  CHECK(cfg.attacks.size() == 14);
  CHECK(cfg.methods.size() == 5);
  CHECK_FALSE(cfg.datasets[0].is_sbm);
  CHECK(cfg.datasets[0].name == "citeseer");
}

TEST_CASE("resolved config echo re-parses to the same configuration") {
  std::string text = std::string(kMinimal) + R"(
[task]
shuffles = 2
repetitions = 4
master_seed = 99
train_fractions = 0.2 0.6

[methods]
dim = 32
p = 2.0

[attacks]
allow_disconnect = true
moment_mode = edge_end

[output]
dir = /tmp/somewhere
formats = json
)";
  const ExperimentConfig cfg = parse_str(text);
  const std::string echoed = resolved_config(cfg);
  const ExperimentConfig again = parse_str(echoed);
  CHECK(again.task == cfg.task);
  CHECK(again.shuffles == cfg.shuffles);
  CHECK(again.repetitions == cfg.repetitions);
  CHECK(again.master_seed == cfg.master_seed);
  CHECK(again.train_fractions == cfg.train_fractions);
  CHECK(again.budgets == cfg.budgets);
  CHECK(again.allow_disconnect == cfg.allow_disconnect);
  CHECK(again.moment_mode == cfg.moment_mode);
  CHECK(again.output_dir == cfg.output_dir);
  CHECK(again.formats == cfg.formats);
  REQUIRE(again.methods.size() == cfg.methods.size());
  CHECK(again.methods[0].method == cfg.methods[0].method);
  CHECK(again.methods[0].dim == cfg.methods[0].dim);
  CHECK(again.methods[0].p == cfg.methods[0].p);
  CHECK(again.attacks == cfg.attacks);
  REQUIRE(again.datasets.size() == 1);
  CHECK(again.datasets[0].name == cfg.datasets[0].name);
}

TEST_CASE("dataset refs") {
  const DatasetRef plain = parse_dataset_ref("cora");
  CHECK_FALSE(plain.is_sbm);
  CHECK(plain.name == "cora");
  const DatasetRef sbm = parse_dataset_ref("sbm:10,20,30:0.5:0.01");
  CHECK(sbm.is_sbm);
  CHECK(sbm.sbm.block_sizes == std::vector<std::size_t>{10, 20, 30});
  CHECK(sbm.sbm.p_out == 0.01);
  CHECK_THROWS_AS(parse_dataset_ref("sbm:10:0.5"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg =
      parse_str(std::string("# leading comment\n; alt comment\n") + kMinimal);
  CHECK(cfg.budgets == std::vector<double>{0.2});
}
