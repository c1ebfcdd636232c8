#include "nerb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "nerb/attack.hpp"
#include "nerb/dataset.hpp"
#include "nerb/error.hpp"
#include "nerb/eval.hpp"

#ifndef NERB_VERSION
#define NERB_VERSION "0.1.0"
#endif

namespace nerb {
namespace {

long read_peak_rss_kb() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      long kb = 0;
      std::sscanf(line.c_str(), "VmHWM: %ld kB", &kb);
      return kb;
    }
  }
  return 0;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct LoadedRef {
  Graph graph{0};
  LabelMap labels;
  std::string checksum;
  std::string error;  // non-empty when loading failed
};

LoadedRef load_ref(const DatasetRef& ref, const std::string& cache_dir,
                   std::uint64_t master_seed, std::size_t index) {
  LoadedRef out;
  try {
    if (ref.is_sbm) {
      SbmSpec spec = ref.sbm;
      spec.seed = derive_seed(master_seed, {0xDA7Aull, index});
      auto [g, labels] = sbm_generate(spec);
      out.graph = std::move(g);
      out.labels = std::move(labels);
      out.checksum = "synthetic";
      return out;
    }
    auto desc = find_dataset(ref.name);
    if (!desc) throw DataError("unknown dataset: " + ref.name);
    const std::string cache =
        cache_dir.empty() ? default_cache_dir() : cache_dir;
    if (!dataset_cached(*desc, cache)) fetch_dataset(*desc, cache);
    LoadedDataset ds = load_dataset(*desc, cache);
    out.graph = std::move(ds.graph);
    out.labels = std::move(ds.labels);
    out.checksum = ds.edge_checksum;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

// One unit of pool work: a (dataset, attack, budget, repetition, method)
// cell; attacked graphs are prebuilt so deterministic attacks run once.
struct Cell {
  std::size_t dataset = 0;
  std::size_t attack = 0;
  std::size_t budget = 0;
  int repetition = 0;
  std::size_t method = 0;
  const Graph* attacked = nullptr;
  std::uint64_t eval_seed = 0;
};

std::vector<ResultRow> run_cell(const ExperimentConfig& cfg,
                                const std::vector<LoadedRef>& data,
                                const Cell& cell) {
  const LoadedRef& ds = data[cell.dataset];
  const AttackStrategy attack = cfg.attacks[cell.attack];
  MethodConfig mcfg = cfg.methods[cell.method];
  mcfg.seed = derive_seed(cfg.master_seed,
                          {3, cell.dataset, cell.attack, cell.budget,
                           static_cast<std::uint64_t>(cell.repetition),
                           cell.method});

  ResultRow base;
  base.task = to_string(cfg.task);
  base.dataset = sanitize(cfg.datasets[cell.dataset].name);
  base.method = to_string(mcfg.method);
  base.attack = to_string(attack);
  base.budget = cfg.budgets[cell.budget];
  base.repetition = cell.repetition;
  base.seed = cell.eval_seed;

  std::vector<ResultRow> rows;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&] {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const long rss = read_peak_rss_kb();
    for (ResultRow& r : rows) {
      r.wall_time_s = secs;
      r.peak_rss_kb = rss;
    }
  };

  try {
    if (cfg.task == Task::kNodeClassification) {
      for (std::size_t t = 0; t < cfg.train_fractions.size(); ++t) {
        NCOptions opts;
        opts.train_fraction = cfg.train_fractions[t];
        opts.shuffles = cfg.shuffles;
        Rng rng(derive_seed(cell.eval_seed, {t}));
        const auto results = node_classification_eval(
            *cell.attacked, ds.labels, mcfg, opts, rng);
        for (std::size_t s = 0; s < results.size(); ++s) {
          ResultRow r = base;
          r.n_tr = cfg.train_fractions[t];
          r.shuffle = static_cast<int>(s);
          r.metric = "f1_micro";
          r.value = results[s].f1_micro;
          rows.push_back(r);
          r.metric = "f1_macro";
          r.value = results[s].f1_macro;
          rows.push_back(r);
          r.metric = "mr";
          r.value = results[s].misclassification_rate;
          rows.push_back(r);
        }
      }
    } else {
      NROptions opts;
      opts.pair_fraction = cfg.pair_fraction;
      Rng rng(cell.eval_seed);
      const NRResult result = network_reconstruction_eval(
          ds.graph, *cell.attacked, mcfg, opts, rng);
      ResultRow r = base;
      r.shuffle = 0;
      r.metric = "auc";
      r.value = result.auc;
      rows.push_back(r);
      r.metric = "ap";
      r.value = result.average_precision;
      rows.push_back(r);
    }
  } catch (const std::exception& e) {
    rows.clear();
    ResultRow r = base;
    r.status = "failed";
    r.metric = "error";
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.note = sanitize(e.what());
    rows.push_back(r);
  }
  finish();
  return rows;
}

auto row_key(const ResultRow& r) {
  return std::tie(r.task, r.dataset, r.method, r.attack, r.budget, r.n_tr,
                  r.metric, r.status, r.shuffle, r.repetition);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg,
                           const std::string& cache_dir) {
  ResultTable table;

  std::vector<LoadedRef> data;
  data.reserve(cfg.datasets.size());
  for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
    data.push_back(load_ref(cfg.datasets[i], cache_dir, cfg.master_seed, i));
    if (!data.back().error.empty()) {
      ResultRow r;
      r.task = to_string(cfg.task);
      r.dataset = sanitize(cfg.datasets[i].name);
      r.status = "failed";
      r.metric = "error";
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.note = sanitize(data.back().error);
      table.rows.push_back(r);
      table.any_failed = true;
    } else {
      table.dataset_checksums[cfg.datasets[i].name] = data.back().checksum;
    }
  }

  // attacked graphs, built once per (dataset, attack, budget) for
  // deterministic strategies and once per repetition otherwise
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, Graph>
      attacked;
  std::vector<Cell> cells;
  for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
    if (!data[d].error.empty()) continue;
    const bool labeled = data[d].labels.num_classes() > 0;
    for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
      const AttackStrategy strategy = cfg.attacks[a];
      if (requires_labels(strategy) && !labeled) {
        ResultRow r;
        r.task = to_string(cfg.task);
        r.dataset = sanitize(cfg.datasets[d].name);
        r.attack = to_string(strategy);
        r.status = "skipped";
        r.metric = "error";
        r.note = "label-based attack on unlabeled dataset";
        table.rows.push_back(r);
        continue;
      }
      for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
          const int rep_eff = is_deterministic(strategy) ? 0 : rep;
          const auto key = std::make_tuple(d, a, b, rep_eff);
          if (!attacked.contains(key)) {
            AttackSpec spec;
            spec.strategy = strategy;
            spec.budget = cfg.budgets[b];
            spec.allow_disconnect = cfg.allow_disconnect;
            spec.moment_mode = cfg.moment_mode;
            spec.seed = derive_seed(
                cfg.master_seed,
                {1, d, a, b, static_cast<std::uint64_t>(rep_eff)});
            try {
              attacked.emplace(
                  key, apply_attack(data[d].graph,
                                    labeled ? &data[d].labels : nullptr, spec)
                           .first);
            } catch (const std::exception& e) {
              ResultRow r;
              r.task = to_string(cfg.task);
              r.dataset = sanitize(cfg.datasets[d].name);
              r.attack = to_string(strategy);
              r.budget = cfg.budgets[b];
              r.repetition = rep;
              r.status = "failed";
              r.metric = "error";
              r.value = std::numeric_limits<double>::quiet_NaN();
              r.note = sanitize(e.what());
              table.rows.push_back(r);
              table.any_failed = true;
              continue;
            }
          }
          for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            Cell cell;
            cell.dataset = d;
            cell.attack = a;
            cell.budget = b;
            cell.repetition = rep;
            cell.method = m;
            cell.attacked = &attacked.at(key);
            cell.eval_seed = derive_seed(
                cfg.master_seed,
                {2, d, a, b, static_cast<std::uint64_t>(rep), m});
            cells.push_back(cell);
          }
        }
      }
    }
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      auto rows = run_cell(cfg, data, cells[i]);
      std::lock_guard<std::mutex> lock(mu);
      for (const auto& r : rows) {
        if (r.status == "failed") table.any_failed = true;
      }
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const ResultRow& x, const ResultRow& y) {
              return row_key(x) < row_key(y);
            });
  append_aggregates(table);
  return table;
}

void append_aggregates(ResultTable& table) {
  using Key = std::tuple<std::string, std::string, std::string, std::string,
                         double, double, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const ResultRow& r : table.rows) {
    if (r.status != "ok") continue;
    groups[{r.task, r.dataset, r.method, r.attack, r.budget, r.n_tr,
            r.metric}]
        .push_back(r.value);
  }
  for (const auto& [key, samples] : groups) {
    const std::size_t n = samples.size();
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    double half = 0.0;
    if (n > 1) {
      var /= static_cast<double>(n - 1);
      const boost::math::students_t dist(static_cast<double>(n - 1));
      half = boost::math::quantile(dist, 0.975) *
             std::sqrt(var / static_cast<double>(n));
    }
    ResultRow r;
    std::tie(r.task, r.dataset, r.method, r.attack, r.budget, r.n_tr,
             r.metric) = key;
    r.status = "mean";
    r.value = mean;
    table.rows.push_back(r);
    r.status = "ci95";
    r.value = half;
    table.rows.push_back(r);
  }
}

namespace {

const char* kCsvHeader =
    "task,dataset,method,attack,budget,n_tr,shuffle,repetition,seed,metric,"
    "value,wall_time_s,peak_rss_kb,status,note";

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kCsvHeader << '\n';
  for (const ResultRow& r : table.rows) {
    out << r.task << ',' << r.dataset << ',' << r.method << ',' << r.attack
        << ',' << format_double(r.budget) << ',' << format_double(r.n_tr)
        << ',' << r.shuffle << ',' << r.repetition << ',' << r.seed << ','
        << r.metric << ',' << format_double(r.value) << ','
        << format_double(r.wall_time_s) << ',' << r.peak_rss_kb << ','
        << r.status << ',' << sanitize(r.note) << '\n';
  }
}

nlohmann::json row_to_json(const ResultRow& r) {
  return {{"task", r.task},
          {"dataset", r.dataset},
          {"method", r.method},
          {"attack", r.attack},
          {"budget", r.budget},
          {"n_tr", r.n_tr},
          {"shuffle", r.shuffle},
          {"repetition", r.repetition},
          {"seed", r.seed},
          {"metric", r.metric},
          {"value", r.value},
          {"wall_time_s", r.wall_time_s},
          {"peak_rss_kb", r.peak_rss_kb},
          {"status", r.status},
          {"note", r.note}};
}

}  // namespace

void emit_report(const ResultTable& table, const ExperimentConfig& cfg) {
  if (table.rows.empty()) {
    throw std::runtime_error("refusing to emit an empty result table");
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " +
                             cfg.output_dir + ": " + ec.message());
  }
  const std::string dir = cfg.output_dir + "/";

  bool want_csv = false;
  bool want_json = false;
  for (const auto& f : cfg.formats) {
    want_csv |= f == "csv";
    want_json |= f == "json";
  }
  if (want_csv) write_csv(table, dir + "results.csv");
  if (want_json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const ResultRow& r : table.rows) doc.push_back(row_to_json(r));
    std::ofstream out(dir + "results.json");
    if (!out) throw std::runtime_error("cannot write results.json");
    out << doc.dump(2) << '\n';
  }

  std::ofstream rc(dir + "resolved_config.ini");
  if (!rc) throw std::runtime_error("cannot write resolved_config.ini");
  rc << resolved_config(cfg);

  nlohmann::json manifest;
  manifest["version"] = NERB_VERSION;
  manifest["master_seed"] = cfg.master_seed;
  manifest["resolved_config"] = resolved_config(cfg);
  manifest["dataset_checksums"] = table.dataset_checksums;
  manifest["rows"] = table.rows.size();
  manifest["any_failed"] = table.any_failed;
  std::ofstream mf(dir + "manifest.json");
  if (!mf) throw std::runtime_error("cannot write manifest.json");
  mf << manifest.dump(2) << '\n';
}

std::vector<ResultRow> parse_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      (line != kCsvHeader && line != std::string(kCsvHeader) + "\r")) {
    throw std::runtime_error("unexpected CSV header in " + path);
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (line.back() == ',') f.push_back("");
    if (f.size() != 15) {
      throw std::runtime_error("bad CSV row: " + line);
    }
    ResultRow r;
    r.task = f[0];
    r.dataset = f[1];
    r.method = f[2];
    r.attack = f[3];
    r.budget = std::stod(f[4]);
    r.n_tr = std::stod(f[5]);
    r.shuffle = std::stoi(f[6]);
    r.repetition = std::stoi(f[7]);
    r.seed = std::stoull(f[8]);
    r.metric = f[9];
    r.value = std::stod(f[10]);
    r.wall_time_s = std::stod(f[11]);
    r.peak_rss_kb = std::stol(f[12]);
    r.status = f[13];
    r.note = f[14];
    rows.push_back(r);
  }
  return rows;
}

ConstrainedDeletionSummary compare_constrained_deletion(
    const ExperimentConfig& cfg, const std::string& cache_dir) {
  if (cfg.task != Task::kNodeClassification) {
    throw ConfigError("constrained-deletion comparison needs f1_micro; "
                      "set task = node_classification");
  }
  ExperimentConfig paired = cfg;
  paired.attacks.clear();
  for (AttackStrategy a : cfg.attacks) {
    if (a == AttackStrategy::kDelRand || a == AttackStrategy::kDelDeg) {
      paired.attacks.push_back(a);
    }
  }
  if (paired.attacks.empty()) {
    throw ConfigError(
        "paired comparison needs del_rand or del_deg in [attacks]");
  }

  auto pooled = [&](bool allow_disconnect, double* mean, double* stddev) {
    ExperimentConfig run = paired;
    run.allow_disconnect = allow_disconnect;
    const ResultTable table = run_experiment(run, cache_dir);
    std::vector<double> values;
    for (const ResultRow& r : table.rows) {
      if (r.status == "ok" && r.metric == "f1_micro") {
        values.push_back(r.value);
      }
    }
    if (values.empty()) {
      throw std::runtime_error("paired run produced no f1_micro rows");
    }
    double m = 0.0;
    for (double v : values) m += v;
    m /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - m) * (v - m);
    if (values.size() > 1) var /= static_cast<double>(values.size() - 1);
    *mean = m;
    *stddev = std::sqrt(var);
  };

  ConstrainedDeletionSummary s;
  pooled(false, &s.constrained_mean, &s.constrained_std);
  pooled(true, &s.unconstrained_mean, &s.unconstrained_std);
  s.gap = s.constrained_mean - s.unconstrained_mean;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.3f ± %.3f vs %.3f ± %.3f",
                s.constrained_mean, s.constrained_std, s.unconstrained_mean,
                s.unconstrained_std);
  s.formatted = buf;
  return s;
}

}  // namespace nerb
