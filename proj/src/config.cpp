#include "nerb/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "nerb/error.hpp"

namespace nerb {

const char* to_string(Task t) {
  return t == Task::kNodeClassification ? "node_classification"
                                        : "network_reconstruction";
}

DatasetRef parse_dataset_ref(const std::string& token) {
  DatasetRef ref;
  ref.name = token;
  if (token.rfind("sbm:", 0) != 0) return ref;
  ref.is_sbm = true;
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(token);
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 4) {
    throw ConfigError("bad sbm spec '" + token +
                      "', expected sbm:<sizes>:<p_in>:<p_out>");
  }
  std::istringstream sizes(parts[1]);
  std::string size;
  while (std::getline(sizes, size, ',')) {
    ref.sbm.block_sizes.push_back(std::stoul(size));
  }
  ref.sbm.p_in = std::stod(parts[2]);
  ref.sbm.p_out = std::stod(parts[3]);
  return ref;
}

namespace {

struct RawConfig {
  // section -> key -> value, plus line numbers for messages
  struct Entry {
    std::string value;
    std::size_t line;
    bool used = false;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
};

RawConfig parse_ini(std::istream& in) {
  RawConfig raw;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == ';') continue;
    if (line[start] == '[') {
      const auto end = line.find(']', start);
      if (end == std::string::npos) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = line.substr(start + 1, end - start - 1);
      raw.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string()
                                    : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any section");
    }
    raw.sections[section][key] = {trim(line.substr(eq + 1)), line_no};
  }
  return raw;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

class Reader {
 public:
  explicit Reader(RawConfig& raw) : raw_(raw) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = raw_.sections.find(section);
    return s != raw_.sections.end() && s->second.contains(key);
  }

  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) {
    auto s = raw_.sections.find(section);
    if (s == raw_.sections.end()) return fallback;
    auto k = s->second.find(key);
    if (k == s->second.end()) return fallback;
    k->second.used = true;
    return k->second.value;
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    try {
      return std::stod(v);
    } catch (...) {
      errors_.push_back("[" + section + "] " + key + ": not a number: " + v);
      return fallback;
    }
  }

  long get_int(const std::string& section, const std::string& key,
               long fallback) {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    try {
      return std::stol(v);
    } catch (...) {
      errors_.push_back("[" + section + "] " + key + ": not an integer: " + v);
      return fallback;
    }
  }

  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    errors_.push_back("[" + section + "] " + key + ": not a boolean: " + v);
    return fallback;
  }

  void error(const std::string& msg) { errors_.push_back(msg); }

  // every key must have been consumed; unknown sections rejected too
  void finish(const std::vector<std::string>& known_sections) {
    for (const auto& [section, keys] : raw_.sections) {
      if (std::find(known_sections.begin(), known_sections.end(), section) ==
          known_sections.end()) {
        errors_.push_back("unknown section [" + section + "]");
        continue;
      }
      for (const auto& [key, entry] : keys) {
        if (!entry.used) {
          errors_.push_back("line " + std::to_string(entry.line) +
                            ": unknown key '" + key + "' in [" + section +
                            "]");
        }
      }
    }
    if (!errors_.empty()) {
      std::string all;
      for (const auto& e : errors_) {
        if (!all.empty()) all += '\n';
        all += e;
      }
      throw ConfigError(all);
    }
  }

 private:
  RawConfig& raw_;
  std::vector<std::string> errors_;
};

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  RawConfig raw = parse_ini(in);
  Reader r(raw);
  ExperimentConfig cfg;

  const std::string task = r.get("task", "type", "node_classification");
  if (task == "node_classification") {
    cfg.task = Task::kNodeClassification;
  } else if (task == "network_reconstruction") {
    cfg.task = Task::kNetworkReconstruction;
  } else {
    r.error("[task] type: unknown task '" + task + "'");
  }
  cfg.shuffles = static_cast<int>(r.get_int("task", "shuffles", cfg.shuffles));
  cfg.repetitions =
      static_cast<int>(r.get_int("task", "repetitions", cfg.repetitions));
  cfg.pair_fraction =
      r.get_double("task", "pair_fraction", cfg.pair_fraction);
  cfg.master_seed = static_cast<std::uint64_t>(
      r.get_int("task", "master_seed", 0));
  cfg.jobs = static_cast<int>(r.get_int("task", "jobs", cfg.jobs));
  if (r.has("task", "train_fractions")) {
    cfg.train_fractions.clear();
    for (const auto& tok : split_ws(r.get("task", "train_fractions", ""))) {
      cfg.train_fractions.push_back(std::stod(tok));
    }
  }

  for (const auto& tok : split_ws(r.get("data", "datasets", ""))) {
    try {
      cfg.datasets.push_back(parse_dataset_ref(tok));
    } catch (const std::exception& e) {
      r.error(e.what());
    }
  }
  if (cfg.datasets.empty()) r.error("[data] datasets: at least one required");

  MethodConfig base;
  base.dim = static_cast<int>(r.get_int("methods", "dim", 128));
  base.num_walks =
      static_cast<int>(r.get_int("methods", "num_walks", base.num_walks));
  base.walk_length =
      static_cast<int>(r.get_int("methods", "walk_length", base.walk_length));
  base.window = static_cast<int>(r.get_int("methods", "window", base.window));
  base.negatives =
      static_cast<int>(r.get_int("methods", "negatives", base.negatives));
  base.epochs = static_cast<int>(r.get_int("methods", "epochs", base.epochs));
  base.learning_rate =
      r.get_double("methods", "learning_rate", base.learning_rate);
  base.p = r.get_double("methods", "p", base.p);
  base.q = r.get_double("methods", "q", base.q);
  base.katz_beta = r.get_double("methods", "katz_beta", base.katz_beta);
  base.netmf_window =
      static_cast<int>(r.get_int("methods", "netmf_window", base.netmf_window));
  base.netmf_negatives =
      r.get_double("methods", "netmf_negatives", base.netmf_negatives);
  base.grarep_k =
      static_cast<int>(r.get_int("methods", "grarep_k", base.grarep_k));
  base.external_command = r.get("methods", "external_command", "");
  for (const auto& tok : split_ws(r.get("methods", "methods", ""))) {
    auto m = embed_method_from_string(tok);
    if (!m) {
      r.error("[methods] methods: unknown method '" + tok + "'");
      continue;
    }
    MethodConfig mc = base;
    mc.method = *m;
    if (mc.method == EmbedMethod::kExternal && mc.external_command.empty()) {
      r.error("[methods] external method needs external_command");
    }
    cfg.methods.push_back(mc);
  }
  if (cfg.methods.empty()) r.error("[methods] methods: at least one required");

  for (const auto& tok : split_ws(r.get("attacks", "attacks", ""))) {
    auto s = attack_strategy_from_string(tok);
    if (!s) {
      r.error("[attacks] attacks: unknown strategy '" + tok + "'");
      continue;
    }
    cfg.attacks.push_back(*s);
  }
  if (cfg.attacks.empty()) r.error("[attacks] attacks: at least one required");
  cfg.allow_disconnect =
      r.get_bool("attacks", "allow_disconnect", cfg.allow_disconnect);
  const std::string mode = r.get("attacks", "moment_mode", "literal");
  if (mode == "literal") {
    cfg.moment_mode = MomentMode::kLiteral;
  } else if (mode == "edge_end") {
    cfg.moment_mode = MomentMode::kEdgeEnd;
  } else {
    r.error("[attacks] moment_mode: expected literal or edge_end");
  }

  for (const auto& tok : split_ws(r.get("budgets", "budgets", ""))) {
    try {
      cfg.budgets.push_back(std::stod(tok));
    } catch (...) {
      r.error("[budgets] budgets: not a number: " + tok);
    }
  }
  if (cfg.budgets.empty()) r.error("[budgets] budgets: at least one required");

  cfg.output_dir = r.get("output", "dir", cfg.output_dir);
  if (r.has("output", "formats")) {
    cfg.formats = split_ws(r.get("output", "formats", ""));
    for (const auto& f : cfg.formats) {
      if (f != "csv" && f != "json") {
        r.error("[output] formats: unknown format '" + f + "'");
      }
    }
  }

  // semantic validation, every violation listed
  for (double b : cfg.budgets) {
    if (b < 0.0) r.error("[budgets] budget " + std::to_string(b) + " < 0");
    for (AttackStrategy a : cfg.attacks) {
      const bool bounded = is_deletion(a) ||
                           a == AttackStrategy::kRewRand ||
                           a == AttackStrategy::kDice;
      if (bounded && b >= 1.0) {
        r.error("[budgets] budget " + std::to_string(b) +
                " invalid for deletion/rewire attack " + to_string(a));
      }
    }
  }
  for (double f : cfg.train_fractions) {
    if (f <= 0.0 || f >= 1.0) {
      r.error("[task] train_fractions: " + std::to_string(f) +
              " outside (0,1)");
    }
  }
  if (cfg.pair_fraction <= 0.0 || cfg.pair_fraction > 1.0) {
    r.error("[task] pair_fraction outside (0,1]");
  }
  if (cfg.shuffles < 1) r.error("[task] shuffles must be >= 1");
  if (cfg.repetitions < 1) r.error("[task] repetitions must be >= 1");
  if (cfg.jobs < 1) r.error("[task] jobs must be >= 1");

  r.finish({"task", "data", "methods", "attacks", "budgets", "output"});
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

std::string resolved_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[task]\n";
  out << "type = " << to_string(cfg.task) << '\n';
  out << "shuffles = " << cfg.shuffles << '\n';
  out << "repetitions = " << cfg.repetitions << '\n';
  out << "pair_fraction = " << cfg.pair_fraction << '\n';
  out << "master_seed = " << cfg.master_seed << '\n';
  out << "jobs = " << cfg.jobs << '\n';
  out << "train_fractions =";
  for (double f : cfg.train_fractions) out << ' ' << f;
  out << "\n\n[data]\ndatasets =";
  for (const auto& d : cfg.datasets) out << ' ' << d.name;
  out << "\n\n[methods]\nmethods =";
  for (const auto& m : cfg.methods) out << ' ' << to_string(m.method);
  out << '\n';
  if (!cfg.methods.empty()) {
    const MethodConfig& m = cfg.methods.front();
    out << "dim = " << m.dim << '\n';
    out << "num_walks = " << m.num_walks << '\n';
    out << "walk_length = " << m.walk_length << '\n';
    out << "window = " << m.window << '\n';
    out << "negatives = " << m.negatives << '\n';
    out << "epochs = " << m.epochs << '\n';
    out << "learning_rate = " << m.learning_rate << '\n';
    out << "p = " << m.p << '\n';
    out << "q = " << m.q << '\n';
    out << "katz_beta = " << m.katz_beta << '\n';
    out << "netmf_window = " << m.netmf_window << '\n';
    out << "netmf_negatives = " << m.netmf_negatives << '\n';
    out << "grarep_k = " << m.grarep_k << '\n';
    if (!m.external_command.empty()) {
      out << "external_command = " << m.external_command << '\n';
    }
  }
  out << "\n[attacks]\nattacks =";
  for (AttackStrategy a : cfg.attacks) out << ' ' << to_string(a);
  out << '\n';
  out << "allow_disconnect = " << (cfg.allow_disconnect ? "true" : "false")
      << '\n';
  out << "moment_mode = "
      << (cfg.moment_mode == MomentMode::kLiteral ? "literal" : "edge_end")
      << '\n';
  out << "\n[budgets]\nbudgets =";
  for (double b : cfg.budgets) out << ' ' << b;
  out << '\n';
  out << "\n[output]\ndir = " << cfg.output_dir << '\n';
  out << "formats =";
  for (const auto& f : cfg.formats) out << ' ' << f;
  out << '\n';
  return out.str();
}

}  // namespace nerb
