#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nerb/embedding.hpp"
#include "nerb/graph.hpp"
#include "nerb/rng.hpp"

namespace nerb {

enum class NodeStatus { kTrain, kCorrect, kIncorrect };

struct NCResult {
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  double misclassification_rate = 0.0;
  std::vector<NodeStatus> per_node_status;  // one per node

  std::string method;
  std::string attack;
  double budget = 0.0;
  double train_fraction = 0.0;
  int shuffle = 0;
  std::uint64_t seed = 0;
};

struct NRResult {
  double auc = 0.0;
  double average_precision = 0.0;

  std::string method;
  std::string attack;
  double budget = 0.0;
  double pair_fraction = 0.0;
  std::uint64_t seed = 0;
};

// Entrywise-product features, one row per pair; symmetric in pair order.
Eigen::MatrixXd hadamard_pair_features(const Embedding& emb,
                                       const std::vector<Edge>& pairs);

struct NCOptions {
  double train_fraction = 0.5;
  int shuffles = 3;
  int cv_folds = 5;
  bool standardize_features = false;  // z-score embedding columns when true
};

// Embeds the (attacked) graph once, then for each shuffle samples
// round(train_fraction * N) train nodes, fits the OvR classifier on their
// embeddings and scores the rest. Labels must cover all nodes.
std::vector<NCResult> node_classification_eval(const Graph& g_attacked,
                                               const LabelMap& labels,
                                               const MethodConfig& cfg,
                                               const NCOptions& opts,
                                               Rng& rng);

struct NROptions {
  double pair_fraction = 0.05;
  int cv_folds = 5;
  bool exclude_train_pairs = false;  // drop training pairs from the test sample
  bool standardize_features = false;
};

// Trains a binary classifier on Hadamard features of the attacked graph's
// edges plus an equal-size non-edge sample, then scores a uniform sample of
// node pairs of the ORIGINAL graph labeled by true edge membership.
NRResult network_reconstruction_eval(const Graph& g_original,
                                     const Graph& g_attacked,
                                     const MethodConfig& cfg,
                                     const NROptions& opts, Rng& rng);

// JSON document with per-node prediction status, labels, edges and the
// result metadata; positions are left to external layout tools.
std::string export_prediction_status(const NCResult& result, const Graph& g,
                                     const LabelMap& labels);

}  // namespace nerb
