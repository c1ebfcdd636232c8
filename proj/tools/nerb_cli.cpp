#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nerb/attack.hpp"
#include "nerb/config.hpp"
#include "nerb/dataset.hpp"
#include "nerb/embedding.hpp"
#include "nerb/eval.hpp"
#include "nerb/graph_io.hpp"
#include "nerb/harness.hpp"

namespace {

// Named datasets come from the cache; "sbm:..." refs are generated in-place;
// anything else is read as a plain edge-list file.
struct Loaded {
  nerb::Graph graph{0};
  nerb::LabelMap labels;
};

Loaded load_dataset_arg(const std::string& token) {
  Loaded out;
  nerb::DatasetRef ref = nerb::parse_dataset_ref(token);
  if (ref.is_sbm) {
    auto [g, labels] = nerb::sbm_generate(ref.sbm);
    out.graph = std::move(g);
    out.labels = std::move(labels);
    return out;
  }
  if (auto desc = nerb::find_dataset(token)) {
    const std::string cache = nerb::default_cache_dir();
    if (!nerb::dataset_cached(*desc, cache)) {
      nerb::fetch_dataset(*desc, cache);
    }
    auto ds = nerb::load_dataset(*desc, cache);
    out.graph = std::move(ds.graph);
    out.labels = std::move(ds.labels);
    return out;
  }
  auto parsed = nerb::read_edge_list_file(token);
  out.graph = std::move(parsed.graph);
  return out;
}

int cmd_stats(const std::string& dataset) {
  Loaded ds = load_dataset_arg(dataset);
  const bool labeled = ds.labels.num_classes() > 0;
  const nerb::GraphStats s =
      nerb::graph_stats(ds.graph, labeled ? &ds.labels : nullptr);
  std::cout << "nodes: " << s.num_nodes << '\n'
            << "edges: " << s.num_edges << '\n'
            << "avg_degree: " << s.avg_degree << '\n'
            << "components: " << nerb::count_components(ds.graph) << '\n';
  if (s.assortativity) {
    std::cout << "assortativity: " << *s.assortativity << '\n';
  } else {
    std::cout << "assortativity: undefined\n";
  }
  if (s.num_labels) std::cout << "labels: " << *s.num_labels << '\n';
  if (s.homophily_ratio) {
    std::cout << "homophily: " << *s.homophily_ratio << '\n';
  }
  return 0;
}

int cmd_attack(const std::string& dataset, const std::string& strategy,
               double budget, std::uint64_t seed, bool allow_disconnect,
               const std::string& out_prefix) {
  Loaded ds = load_dataset_arg(dataset);
  auto s = nerb::attack_strategy_from_string(strategy);
  if (!s) {
    std::cerr << "unknown attack strategy: " << strategy << '\n';
    return 2;
  }
  nerb::AttackSpec spec;
  spec.strategy = *s;
  spec.budget = budget;
  spec.seed = seed;
  spec.allow_disconnect = allow_disconnect;
  auto [attacked, log] = nerb::apply_attack(
      ds.graph, ds.labels.num_classes() > 0 ? &ds.labels : nullptr, spec);

  std::ofstream edges(out_prefix + ".edges");
  if (!edges) {
    std::cerr << "cannot write " << out_prefix << ".edges\n";
    return 1;
  }
  nerb::write_edge_list(edges, attacked);
  std::ofstream lf(out_prefix + ".attack.json");
  lf << log.to_json() << '\n';
  std::cout << "requested: " << log.requested_changes << '\n'
            << "achieved: " << log.achieved_changes << '\n';
  if (!log.shortfall_reason.empty()) {
    std::cout << "shortfall: " << log.shortfall_reason << '\n';
  }
  return 0;
}

int cmd_embed(const std::string& dataset, const std::string& method, int dim,
              std::uint64_t seed, const std::string& out_path) {
  Loaded ds = load_dataset_arg(dataset);
  auto m = nerb::embed_method_from_string(method);
  if (!m) {
    std::cerr << "unknown embedding method: " << method << '\n';
    return 2;
  }
  nerb::MethodConfig cfg;
  cfg.method = *m;
  cfg.dim = dim;
  cfg.seed = seed;
  const nerb::Embedding emb = nerb::embed(ds.graph, cfg);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << '\n';
    return 1;
  }
  nerb::write_embedding(out, emb);
  std::cout << "wrote " << emb.x.rows() << " x " << emb.x.cols() << " to "
            << out_path << '\n';
  return 0;
}

int cmd_fetch(const std::string& dataset) {
  auto desc = nerb::find_dataset(dataset);
  if (!desc) {
    std::cerr << "unknown dataset: " << dataset << '\n';
    return 2;
  }
  const std::string cache = nerb::default_cache_dir();
  nerb::fetch_dataset(*desc, cache);
  std::cout << "cached " << dataset << " under " << cache << '\n';
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::int64_t seed, int jobs) {
  nerb::ExperimentConfig cfg;
  try {
    cfg = nerb::parse_config_file(config_path);
  } catch (const nerb::ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return 2;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
  if (jobs > 0) cfg.jobs = jobs;

  const nerb::ResultTable table = nerb::run_experiment(cfg);
  nerb::emit_report(table, cfg);
  std::size_t ok = 0, failed = 0, skipped = 0;
  for (const auto& r : table.rows) {
    if (r.status == "ok") ++ok;
    else if (r.status == "failed") ++failed;
    else if (r.status == "skipped") ++skipped;
  }
  std::cout << "rows: " << table.rows.size() << " (ok " << ok << ", failed "
            << failed << ", skipped " << skipped << ")\n"
            << "report: " << cfg.output_dir << '\n';
  return table.any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"node-embedding robustness benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::int64_t run_seed = -1;
  int jobs = 0;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", run_seed, "master seed override");
  run->add_option("--jobs", jobs, "worker threads");

  std::string ds_name;
  auto* stats = app.add_subcommand("stats", "print dataset statistics");
  stats->add_option("dataset", ds_name, "dataset name, sbm spec or edge list")
      ->required();

  std::string atk_dataset, atk_strategy, atk_out = "attacked";
  double atk_budget = 0.0;
  std::uint64_t atk_seed = 0;
  bool allow_disconnect = false;
  auto* attack = app.add_subcommand("attack", "poison a graph");
  attack->add_option("dataset", atk_dataset)->required();
  attack->add_option("strategy", atk_strategy)->required();
  attack->add_option("budget", atk_budget)->required();
  attack->add_option("--seed", atk_seed);
  attack->add_option("--out", atk_out, "output file prefix");
  attack->add_flag("--allow-disconnect", allow_disconnect);

  std::string emb_dataset, emb_method, emb_out = "embedding.txt";
  int emb_dim = 128;
  std::uint64_t emb_seed = 0;
  auto* embed = app.add_subcommand("embed", "embed a graph");
  embed->add_option("dataset", emb_dataset)->required();
  embed->add_option("method", emb_method)->required();
  embed->add_option("--dim", emb_dim);
  embed->add_option("--seed", emb_seed);
  embed->add_option("--out", emb_out, "output file");

  std::string fetch_name;
  auto* fetch = app.add_subcommand("fetch", "download a dataset to the cache");
  fetch->add_option("dataset", fetch_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(run)) {
      return cmd_run(config_path, out_dir, run_seed, jobs);
    }
    if (app.got_subcommand(stats)) return cmd_stats(ds_name);
    if (app.got_subcommand(attack)) {
      return cmd_attack(atk_dataset, atk_strategy, atk_budget, atk_seed,
                        allow_disconnect, atk_out);
    }
    if (app.got_subcommand(embed)) {
      return cmd_embed(emb_dataset, emb_method, emb_dim, emb_seed, emb_out);
    }
    if (app.got_subcommand(fetch)) return cmd_fetch(fetch_name);
  } catch (const nerb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
