#include <algorithm>
#include <stdexcept>

#include "nerb/embedding.hpp"

namespace nerb {

double node2vec_step_weight(const Graph& g, NodeId prev, NodeId candidate,
                            double p, double q) {
  if (candidate == prev) return 1.0 / p;
  if (g.has_edge(candidate, prev)) return 1.0;
  return 1.0 / q;
}

WalkCorpus generate_walks(const Graph& g, int num_walks, int walk_length,
                          double p, double q, Rng& rng) {
  if (walk_length < 1) {
    throw std::invalid_argument("walk_length must be >= 1");
  }
  if (num_walks < 1) {
    throw std::invalid_argument("num_walks must be >= 1");
  }
  const bool first_order = (p == 1.0 && q == 1.0);
  const std::size_t n = g.num_nodes();
  WalkCorpus corpus;
  corpus.walks.reserve(n * static_cast<std::size_t>(num_walks));

  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  std::vector<double> weights;

  for (int pass = 0; pass < num_walks; ++pass) {
    // Fisher-Yates with our own stream, one shuffle per pass.
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    for (NodeId start : order) {
      std::vector<NodeId> walk;
      walk.reserve(walk_length);
      walk.push_back(start);
      NodeId cur = start;
      while (static_cast<int>(walk.size()) < walk_length) {
        const auto& nbrs = g.neighbors(cur);
        if (nbrs.empty()) break;  // dead end, walk ends early
        NodeId next;
        if (first_order || walk.size() == 1) {
          next = nbrs[rng.uniform_index(nbrs.size())];
        } else {
          const NodeId prev = walk[walk.size() - 2];
          weights.resize(nbrs.size());
          for (std::size_t i = 0; i < nbrs.size(); ++i) {
            weights[i] = node2vec_step_weight(g, prev, nbrs[i], p, q);
          }
          next = nbrs[rng.weighted_index(weights)];
        }
        walk.push_back(next);
        cur = next;
      }
      corpus.walks.push_back(std::move(walk));
    }
  }
  return corpus;
}

}  // namespace nerb
