#include "nerb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "nerb/error.hpp"
#include "nerb/logreg.hpp"
#include "nerb/metrics.hpp"

namespace nerb {

namespace {

std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

void standardize_columns(Eigen::MatrixXd& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    const double var =
        (x.col(j).array() - mean).square().sum() / x.rows();
    const double sd = std::sqrt(var);
    x.col(j).array() -= mean;
    if (sd > 0.0) x.col(j) /= sd;
  }
}

}  // namespace

Eigen::MatrixXd hadamard_pair_features(const Embedding& emb,
                                       const std::vector<Edge>& pairs) {
  Eigen::MatrixXd out(pairs.size(), emb.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].u >= emb.num_nodes() || pairs[i].v >= emb.num_nodes()) {
      throw std::invalid_argument("hadamard_pair_features: node id out of range");
    }
    out.row(i) =
        emb.x.row(pairs[i].u).cwiseProduct(emb.x.row(pairs[i].v));
  }
  return out;
}

std::vector<NCResult> node_classification_eval(const Graph& g_attacked,
                                               const LabelMap& labels,
                                               const MethodConfig& cfg,
                                               const NCOptions& opts,
                                               Rng& rng) {
  if (opts.train_fraction <= 0.0 || opts.train_fraction >= 1.0) {
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  }
  if (!labels.fully_labeled() || labels.size() != g_attacked.num_nodes()) {
    throw std::invalid_argument(
        "node classification requires a label for every node");
  }
  Embedding emb = embed(g_attacked, cfg);
  Eigen::MatrixXd features = emb.x;
  if (opts.standardize_features) standardize_columns(features);

  const std::size_t n = g_attacked.num_nodes();
  const std::size_t n_train = round_half_up(opts.train_fraction * n);

  std::vector<NCResult> results;
  for (int shuffle = 0; shuffle < opts.shuffles; ++shuffle) {
    std::vector<NodeId> perm(n);
    for (NodeId v = 0; v < n; ++v) perm[v] = v;
    for (std::size_t i = n; i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    }
    Eigen::MatrixXd x_train(n_train, features.cols());
    std::vector<int> y_train(n_train);
    for (std::size_t i = 0; i < n_train; ++i) {
      x_train.row(i) = features.row(perm[i]);
      y_train[i] = labels.label(perm[i]);
    }
    OvrClassifier clf = train_logreg_ovr(x_train, y_train, opts.cv_folds,
                                         default_reg_grid(), rng);
    NCResult r;
    r.per_node_status.assign(n, NodeStatus::kTrain);
    std::vector<int> y_true, y_pred;
    y_true.reserve(n - n_train);
    y_pred.reserve(n - n_train);
    for (std::size_t i = n_train; i < n; ++i) {
      const NodeId v = perm[i];
      const int pred = clf.predict(Eigen::RowVectorXd(features.row(v)));
      y_true.push_back(labels.label(v));
      y_pred.push_back(pred);
      r.per_node_status[v] = pred == labels.label(v) ? NodeStatus::kCorrect
                                                     : NodeStatus::kIncorrect;
    }
    const F1Scores f1 = f1_scores(y_true, y_pred);
    r.f1_micro = f1.micro;
    r.f1_macro = f1.macro;
    std::size_t incorrect = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      if (y_true[i] != y_pred[i]) ++incorrect;
    }
    r.misclassification_rate =
        static_cast<double>(incorrect) / static_cast<double>(y_true.size());
    r.method = to_string(cfg.method);
    r.train_fraction = opts.train_fraction;
    r.shuffle = shuffle;
    r.seed = cfg.seed;
    results.push_back(std::move(r));
  }
  return results;
}

NRResult network_reconstruction_eval(const Graph& g_original,
                                     const Graph& g_attacked,
                                     const MethodConfig& cfg,
                                     const NROptions& opts, Rng& rng) {
  if (g_original.num_nodes() != g_attacked.num_nodes()) {
    throw std::invalid_argument("reconstruction: node sets must match");
  }
  if (g_attacked.num_edges() == 0) {
    throw std::invalid_argument("reconstruction: attacked graph has no edges");
  }
  if (opts.pair_fraction <= 0.0 || opts.pair_fraction > 1.0) {
    throw std::invalid_argument("pair_fraction must be in (0, 1]");
  }
  const std::size_t n = g_original.num_nodes();
  Embedding emb = embed(g_attacked, cfg);

  // training set: every edge of the attacked graph + an equal-size uniform
  // sample of its non-edges
  std::vector<Edge> train_pairs = g_attacked.edges();
  std::vector<int> train_labels(train_pairs.size(), 1);
  const std::size_t num_edges = train_pairs.size();
  const std::size_t all_pairs = n * (n - 1) / 2;
  const std::size_t num_non = std::min(num_edges, all_pairs - num_edges);
  std::unordered_set<std::uint64_t> chosen;
  std::size_t guard = 0;
  while (chosen.size() < num_non && guard++ < 1000 * (num_non + 1)) {
    NodeId a = static_cast<NodeId>(rng.uniform_index(n));
    NodeId b = static_cast<NodeId>(rng.uniform_index(n));
    if (a == b || g_attacked.has_edge(a, b)) continue;
    Edge e = make_edge(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
    if (chosen.insert(key).second) {
      train_pairs.push_back(e);
      train_labels.push_back(0);
    }
  }
  Eigen::MatrixXd x_train = hadamard_pair_features(emb, train_pairs);
  if (opts.standardize_features) standardize_columns(x_train);
  Rng cv_rng = rng.fork(0x4e52);
  OvrClassifier clf = train_logreg_ovr(x_train, train_labels, opts.cv_folds,
                                       default_reg_grid(), cv_rng);
  const BinaryLogReg& model = clf.models.size() > 1 ? clf.models[1]
                                                    : clf.models[0];

  // test set: uniform sample of unordered pairs of the original graph
  const std::size_t num_test =
      std::max<std::size_t>(1, round_half_up(opts.pair_fraction *
                                             static_cast<double>(all_pairs)));
  std::vector<Edge> test_pairs;
  if (num_test >= all_pairs) {
    for (NodeId a = 0; a + 1 < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) test_pairs.push_back(Edge{a, b});
    }
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (test_pairs.size() < num_test) {
      NodeId a = static_cast<NodeId>(rng.uniform_index(n));
      NodeId b = static_cast<NodeId>(rng.uniform_index(n));
      if (a == b) continue;
      Edge e = make_edge(a, b);
      const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
      if (opts.exclude_train_pairs && chosen.contains(key)) continue;
      if (opts.exclude_train_pairs && g_attacked.has_edge(e.u, e.v)) continue;
      if (seen.insert(key).second) test_pairs.push_back(e);
    }
  }
  Eigen::MatrixXd x_test = hadamard_pair_features(emb, test_pairs);
  if (opts.standardize_features) standardize_columns(x_test);
  std::vector<double> scores(test_pairs.size());
  std::vector<int> truth(test_pairs.size());
  for (std::size_t i = 0; i < test_pairs.size(); ++i) {
    scores[i] = model.score(Eigen::RowVectorXd(x_test.row(i)));
    truth[i] = g_original.has_edge(test_pairs[i].u, test_pairs[i].v) ? 1 : 0;
  }
  NRResult r;
  r.auc = auc(scores, truth);
  r.average_precision = average_precision(scores, truth);
  r.method = to_string(cfg.method);
  r.pair_fraction = opts.pair_fraction;
  r.seed = cfg.seed;
  return r;
}

std::string export_prediction_status(const NCResult& result, const Graph& g,
                                     const LabelMap& labels) {
  nlohmann::json doc;
  doc["mr"] = result.misclassification_rate;
  doc["f1_micro"] = result.f1_micro;
  doc["f1_macro"] = result.f1_macro;
  doc["method"] = result.method;
  doc["attack"] = result.attack;
  doc["budget"] = result.budget;
  doc["train_fraction"] = result.train_fraction;
  doc["shuffle"] = result.shuffle;
  doc["seed"] = result.seed;
  auto status_name = [](NodeStatus s) {
    switch (s) {
      case NodeStatus::kTrain:
        return "train";
      case NodeStatus::kCorrect:
        return "correct";
      default:
        return "incorrect";
    }
  };
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    nodes.push_back({{"id", v},
                     {"label", labels.has_label(v) ? labels.label(v) : -1},
                     {"status", status_name(result.per_node_status.at(v))}});
  }
  doc["nodes"] = std::move(nodes);
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({e.u, e.v});
  }
  doc["edges"] = std::move(edges);
  return doc.dump();
}

}  // namespace nerb
