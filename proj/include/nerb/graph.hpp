#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace nerb {

using NodeId = std::uint32_t;

// Undirected edge stored in canonical order (u < v).
struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

Edge make_edge(NodeId a, NodeId b);  // canonicalizes; throws on self-loop

// Undirected simple graph over dense node ids 0..N-1.
// Invariants: no self-loops, no duplicate edges, adjacency mirrors the
// edge set exactly.
class Graph {
 public:
  explicit Graph(std::size_t num_nodes);

  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges);

  std::size_t num_nodes() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_edge(NodeId a, NodeId b) const;

  // Returns false (and leaves the graph unchanged) if the edge already
  // exists. Throws std::invalid_argument on self-loops or bad ids.
  bool add_edge(NodeId a, NodeId b);

  // Returns false if the edge is absent.
  bool remove_edge(NodeId a, NodeId b);

  std::size_t degree(NodeId v) const;
  const std::vector<NodeId>& neighbors(NodeId v) const;

  // Edge list in unspecified but deterministic order.
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void check_node(NodeId v) const;
  static std::uint64_t key(NodeId a, NodeId b);

  std::vector<std::vector<NodeId>> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;  // key -> pos
};

// Node labels, dense class ids 0..num_classes-1; kNoLabel marks unlabeled.
class LabelMap {
 public:
  static constexpr int kNoLabel = -1;

  LabelMap() = default;
  explicit LabelMap(std::vector<int> labels);

  int label(NodeId v) const { return labels_.at(v); }
  bool has_label(NodeId v) const { return labels_.at(v) != kNoLabel; }
  std::size_t size() const { return labels_.size(); }
  int num_classes() const { return num_classes_; }
  bool fully_labeled() const;
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<int> labels_;
  int num_classes_ = 0;
};

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::optional<int> num_labels;
  double avg_degree = 0.0;
  std::optional<double> assortativity;  // empty when undefined (sigma = 0)
  std::optional<double> homophily_ratio;
};

// Interpretation of the per-edge degree moments used by the assortativity
// attacks. See edge_degree_moments.
enum class MomentMode {
  kLiteral,  // mu = (1/M) sum_l dbar_l^2, sigma = sqrt((1/M) sum_l dbar_l (dbar_l - mu)^2)
             // with dbar_l = mean endpoint degree of edge l
  kEdgeEnd,  // mean / population std of endpoint degrees over the 2M edge ends
};

struct EdgeDegreeMoments {
  double mu = 0.0;
  double sigma = 0.0;
};

// Newman degree assortativity: Pearson correlation over edge-end degree
// pairs, both orientations. Throws UndefinedStatistic when the edge-end
// degrees have zero variance (regular graphs), std::invalid_argument on
// an empty edge set.
double graph_assortativity(const Graph& g);

// Per-edge moments for the assortativity-based attacks. sigma is reported
// as 0 (not thrown) when all endpoint degrees are equal; callers that
// need sigma > 0 must refuse on their own.
EdgeDegreeMoments edge_degree_moments(const Graph& g, MomentMode mode);

// Product of standard scores of the two endpoint degrees.
double edge_assortativity_score(const Graph& g, Edge e, double mu,
                                double sigma);

// Fraction of edges whose endpoints share a label. All endpoints must be
// labeled.
double homophily_ratio(const Graph& g, const LabelMap& labels);

// Component id per node, ids dense in discovery order.
std::vector<std::uint32_t> connected_components(const Graph& g);
std::size_t count_components(const Graph& g);

// True iff e is a bridge. e must be present.
bool is_disconnecting(const Graph& g, Edge e);

GraphStats graph_stats(const Graph& g, const LabelMap* labels = nullptr);

}  // namespace nerb
