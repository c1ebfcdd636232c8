#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nerb/graph.hpp"
#include "nerb/rng.hpp"

namespace nerb {

enum class EmbedMethod {
  kDeepwalk,
  kNode2vec,
  kHope,
  kNetmf,
  kGrarep,
  kExternal,  // plugin: external executable speaking the file formats
};

const char* to_string(EmbedMethod m);
std::optional<EmbedMethod> embed_method_from_string(const std::string& name);

struct MethodConfig {
  EmbedMethod method = EmbedMethod::kDeepwalk;
  int dim = 128;

  // walk / Skip-Gram family
  int num_walks = 10;
  int walk_length = 80;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  double p = 1.0;  // node2vec return parameter
  double q = 1.0;  // node2vec in/out parameter

  // factorization family
  double katz_beta = 0.0;  // 0 = auto (0.5 / spectral radius)
  int netmf_window = 10;
  double netmf_negatives = 1.0;
  int grarep_k = 4;

  // external plugin: command invoked as "<cmd> <edge_list> <out_file> <dim>"
  std::string external_command;

  std::uint64_t seed = 0;
};

struct Embedding {
  Eigen::MatrixXd x;  // one row per node
  std::string method_name;

  Eigen::Index num_nodes() const { return x.rows(); }
  Eigen::Index dim() const { return x.cols(); }
  bool all_finite() const { return x.allFinite(); }
};

struct WalkCorpus {
  std::vector<std::vector<NodeId>> walks;
};

// Second-order (node2vec) random walks; p = q = 1 reduces to uniform
// first-order walks. Isolated nodes yield singleton walks.
WalkCorpus generate_walks(const Graph& g, int num_walks, int walk_length,
                          double p, double q, Rng& rng);

// Unnormalized second-order step weight: 1/p to return, 1 for neighbors of
// the previous node, 1/q otherwise. Exposed for tests.
double node2vec_step_weight(const Graph& g, NodeId prev, NodeId candidate,
                            double p, double q);

// Skip-Gram with negative sampling over the walk corpus. Returns the
// center-vector matrix; per-epoch mean pair losses are stored in
// epoch_losses when non-null.
Embedding skipgram_train(const WalkCorpus& corpus, std::size_t num_nodes,
                         const MethodConfig& cfg, Rng& rng,
                         std::vector<double>* epoch_losses = nullptr);

// Loss of one (center, context, negatives) triple:
//   -log sigmoid(c . ctx) - sum_n log sigmoid(-c . n)
// and its analytic gradients. Split out so the gradient can be checked
// against finite differences.
double skipgram_pair_loss(const Eigen::VectorXd& center,
                          const Eigen::VectorXd& context,
                          const std::vector<Eigen::VectorXd>& negs);
double skipgram_pair_grad(const Eigen::VectorXd& center,
                          const Eigen::VectorXd& context,
                          const std::vector<Eigen::VectorXd>& negs,
                          Eigen::VectorXd& grad_center,
                          Eigen::VectorXd& grad_context,
                          std::vector<Eigen::VectorXd>& grad_negs);

// Katz-similarity factorization: S = (I - bA)^{-1} bA via rank-d/2 SVD,
// embedding [U sqrt(S) | V sqrt(S)]. katz_beta = 0 picks 0.5 / rho(A).
Embedding hope_embed(const Graph& g, int dim, double katz_beta = 0.0);

// Log of the shifted DeepWalk matrix, rank-d SVD, U sqrt(S).
Embedding netmf_embed(const Graph& g, int dim, int window,
                      double negatives = 1.0);

// Per-step-length transition-matrix factorizations, d/K columns each,
// concatenated. K must divide dim.
Embedding grarep_embed(const Graph& g, int dim, int k_steps);

// Dispatch on cfg.method; reproducible for a fixed seed.
Embedding embed(const Graph& g, const MethodConfig& cfg);

// Text format: header "N d", then one "node_id v_1 ... v_d" line per node.
void write_embedding(std::ostream& out, const Embedding& e);
Embedding read_embedding(std::istream& in);

// Compact binary form: two little-endian uint64 counts, then row-major
// 64-bit floats.
void write_embedding_binary(std::ostream& out, const Embedding& e);
Embedding read_embedding_binary(std::istream& in);

}  // namespace nerb
