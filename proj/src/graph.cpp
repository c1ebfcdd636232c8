#include "nerb/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "nerb/error.hpp"

namespace nerb {

Edge make_edge(NodeId a, NodeId b) {
  if (a == b) {
    throw std::invalid_argument("self-loop edge (" + std::to_string(a) + ")");
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

Graph::Graph(std::size_t num_nodes) : adj_(num_nodes) {}

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges) {
  Graph g(num_nodes);
  for (const Edge& e : edges) g.add_edge(e.u, e.v);
  return g;
}

std::uint64_t Graph::key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void Graph::check_node(NodeId v) const {
  if (v >= adj_.size()) {
    throw std::invalid_argument("node id " + std::to_string(v) +
                                " out of range (N=" +
                                std::to_string(adj_.size()) + ")");
  }
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  check_node(a);
  check_node(b);
  return edge_index_.contains(key(a, b));
}

bool Graph::add_edge(NodeId a, NodeId b) {
  Edge e = make_edge(a, b);
  check_node(e.u);
  check_node(e.v);
  auto [it, inserted] = edge_index_.try_emplace(key(a, b), edges_.size());
  if (!inserted) return false;
  edges_.push_back(e);
  adj_[e.u].push_back(e.v);
  adj_[e.v].push_back(e.u);
  return true;
}

bool Graph::remove_edge(NodeId a, NodeId b) {
  Edge e = make_edge(a, b);
  check_node(e.u);
  check_node(e.v);
  auto it = edge_index_.find(key(a, b));
  if (it == edge_index_.end()) return false;
  std::size_t pos = it->second;
  edge_index_.erase(it);
  if (pos != edges_.size() - 1) {
    edges_[pos] = edges_.back();
    edge_index_[key(edges_[pos].u, edges_[pos].v)] = pos;
  }
  edges_.pop_back();
  for (NodeId x : {e.u, e.v}) {
    NodeId other = (x == e.u) ? e.v : e.u;
    auto& nbrs = adj_[x];
    nbrs.erase(std::find(nbrs.begin(), nbrs.end(), other));
  }
  return true;
}

std::size_t Graph::degree(NodeId v) const {
  check_node(v);
  return adj_[v].size();
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
  check_node(v);
  return adj_[v];
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) {
    return false;
  }
  for (const Edge& e : a.edges_) {
    if (!b.edge_index_.contains(Graph::key(e.u, e.v))) return false;
  }
  return true;
}

LabelMap::LabelMap(std::vector<int> labels) : labels_(std::move(labels)) {
  std::unordered_set<int> distinct;
  for (int l : labels_) {
    if (l != kNoLabel) distinct.insert(l);
  }
  num_classes_ = static_cast<int>(distinct.size());
}

bool LabelMap::fully_labeled() const {
  return std::none_of(labels_.begin(), labels_.end(),
                      [](int l) { return l == kNoLabel; });
}

double graph_assortativity(const Graph& g) {
  const std::size_t m = g.num_edges();
  if (m == 0) throw std::invalid_argument("assortativity: empty edge set");
  // Pearson over the 2M ordered edge-end pairs {(d_i,d_j)} u {(d_j,d_i)}.
  double sx = 0.0, sxx = 0.0, sxy = 0.0;
  for (const Edge& e : g.edges()) {
    double di = static_cast<double>(g.degree(e.u));
    double dj = static_cast<double>(g.degree(e.v));
    sx += di + dj;
    sxx += di * di + dj * dj;
    sxy += 2.0 * di * dj;
  }
  const double n = 2.0 * static_cast<double>(m);
  const double mean = sx / n;
  const double var = sxx / n - mean * mean;
  if (var <= 1e-12 * mean * mean + 1e-300) {
    throw UndefinedStatistic(
        "assortativity undefined: edge-end degrees have zero variance");
  }
  const double cov = sxy / n - mean * mean;
  return cov / var;
}

EdgeDegreeMoments edge_degree_moments(const Graph& g, MomentMode mode) {
  const std::size_t m = g.num_edges();
  if (m == 0) {
    throw std::invalid_argument("edge_degree_moments: empty edge set");
  }
  // Degenerate case: all endpoint degrees equal. Reported as sigma = 0 in
  // both modes so dependents can refuse uniformly.
  bool all_equal = true;
  const double d0 = static_cast<double>(g.degree(g.edges().front().u));
  for (const Edge& e : g.edges()) {
    if (static_cast<double>(g.degree(e.u)) != d0 ||
        static_cast<double>(g.degree(e.v)) != d0) {
      all_equal = false;
      break;
    }
  }

  EdgeDegreeMoments out;
  if (mode == MomentMode::kLiteral) {
    // d_l is one degree value per edge; we use the mean endpoint degree.
    double mu = 0.0;
    for (const Edge& e : g.edges()) {
      const double dl = 0.5 * (g.degree(e.u) + g.degree(e.v));
      mu += dl * dl;
    }
    mu /= static_cast<double>(m);
    double s = 0.0;
    for (const Edge& e : g.edges()) {
      const double dl = 0.5 * (g.degree(e.u) + g.degree(e.v));
      s += dl * (dl - mu) * (dl - mu);
    }
    out.mu = mu;
    out.sigma = all_equal ? 0.0 : std::sqrt(s / static_cast<double>(m));
  } else {
    double sum = 0.0, sumsq = 0.0;
    for (const Edge& e : g.edges()) {
      sum += g.degree(e.u) + g.degree(e.v);
      sumsq += static_cast<double>(g.degree(e.u)) * g.degree(e.u) +
               static_cast<double>(g.degree(e.v)) * g.degree(e.v);
    }
    const double n = 2.0 * static_cast<double>(m);
    out.mu = sum / n;
    const double var = std::max(0.0, sumsq / n - out.mu * out.mu);
    out.sigma = all_equal ? 0.0 : std::sqrt(var);
  }
  return out;
}

double edge_assortativity_score(const Graph& g, Edge e, double mu,
                                double sigma) {
  if (sigma <= 0.0) {
    throw UndefinedStatistic("edge assortativity score: sigma = 0");
  }
  if (!g.has_edge(e.u, e.v)) {
    throw std::invalid_argument("edge_assortativity_score: edge not in graph");
  }
  const double zi = (static_cast<double>(g.degree(e.u)) - mu) / sigma;
  const double zj = (static_cast<double>(g.degree(e.v)) - mu) / sigma;
  return zi * zj;
}

double homophily_ratio(const Graph& g, const LabelMap& labels) {
  if (g.num_edges() == 0) {
    throw std::invalid_argument("homophily_ratio: empty edge set");
  }
  std::size_t same = 0;
  for (const Edge& e : g.edges()) {
    if (!labels.has_label(e.u) || !labels.has_label(e.v)) {
      throw std::invalid_argument("homophily_ratio: unlabeled endpoint");
    }
    if (labels.label(e.u) == labels.label(e.v)) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(g.num_edges());
}

std::vector<std::uint32_t> connected_components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::uint32_t next = 0;
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != UINT32_MAX) continue;
    comp[s] = next;
    queue.push_back(s);
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (NodeId w : g.neighbors(v)) {
        if (comp[w] == UINT32_MAX) {
          comp[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::size_t count_components(const Graph& g) {
  auto comp = connected_components(g);
  std::uint32_t mx = 0;
  for (std::uint32_t c : comp) mx = std::max(mx, c);
  return g.num_nodes() == 0 ? 0 : static_cast<std::size_t>(mx) + 1;
}

bool is_disconnecting(const Graph& g, Edge e) {
  if (!g.has_edge(e.u, e.v)) {
    throw std::invalid_argument("is_disconnecting: edge not in graph");
  }
  // BFS from e.u avoiding the edge itself; e is a bridge iff e.v becomes
  // unreachable.
  std::vector<bool> seen(g.num_nodes(), false);
  std::deque<NodeId> queue{e.u};
  seen[e.u] = true;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbors(v)) {
      if ((v == e.u && w == e.v) || (v == e.v && w == e.u)) continue;
      if (!seen[w]) {
        if (w == e.v) return false;
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return !seen[e.v];
}

GraphStats graph_stats(const Graph& g, const LabelMap* labels) {
  GraphStats s;
  s.num_nodes = g.num_nodes();
  s.num_edges = g.num_edges();
  s.avg_degree = s.num_nodes == 0
                     ? 0.0
                     : 2.0 * static_cast<double>(s.num_edges) /
                           static_cast<double>(s.num_nodes);
  if (s.num_edges > 0) {
    try {
      s.assortativity = graph_assortativity(g);
    } catch (const UndefinedStatistic&) {
      // reported as absent
    }
  }
  if (labels != nullptr && labels->num_classes() > 0) {
    s.num_labels = labels->num_classes();
    if (s.num_edges > 0 && labels->fully_labeled()) {
      s.homophily_ratio = homophily_ratio(g, *labels);
    }
  }
  return s;
}

}  // namespace nerb
