#include "nerb/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nerb/error.hpp"

namespace nerb {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

bool next_tokens(std::istream& in, std::vector<std::string>& tokens,
                 std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    tokens.clear();
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    return true;
  }
  return false;
}

}  // namespace

NodeId IdMap::intern(const std::string& token) {
  auto [it, inserted] = id_of.try_emplace(token, token_of.size());
  if (inserted) token_of.push_back(token);
  return it->second;
}

LoadedGraph read_edge_list(std::istream& in) {
  IdMap ids;
  std::vector<std::pair<NodeId, NodeId>> raw;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  LoadWarnings warn;
  while (next_tokens(in, tokens, line_no)) {
    if (tokens.size() != 2) {
      throw DataError("edge list line " + std::to_string(line_no) +
                      ": expected two tokens, got " +
                      std::to_string(tokens.size()));
    }
    NodeId a = ids.intern(tokens[0]);
    NodeId b = ids.intern(tokens[1]);
    if (a == b) {
      ++warn.self_loops_dropped;
      continue;
    }
    raw.emplace_back(a, b);
  }
  Graph g(ids.token_of.size());
  for (auto [a, b] : raw) {
    if (!g.add_edge(a, b)) ++warn.duplicates_dropped;
  }
  return LoadedGraph{std::move(g), std::move(ids), warn};
}

LoadedGraph read_edge_list_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_edge_list(in);
}

LabelMap read_label_file(std::istream& in, const IdMap& ids) {
  std::vector<int> labels(ids.token_of.size(), LabelMap::kNoLabel);
  std::unordered_map<std::string, int> class_of;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  while (next_tokens(in, tokens, line_no)) {
    if (tokens.size() != 2) {
      throw DataError("label file line " + std::to_string(line_no) +
                      ": expected two tokens");
    }
    auto node_it = ids.id_of.find(tokens[0]);
    if (node_it == ids.id_of.end()) {
      throw DataError("label file line " + std::to_string(line_no) +
                      ": unknown node token '" + tokens[0] + "'");
    }
    auto [cls_it, _] =
        class_of.try_emplace(tokens[1], static_cast<int>(class_of.size()));
    int& slot = labels[node_it->second];
    if (slot != LabelMap::kNoLabel && slot != cls_it->second) {
      throw DataError("label file line " + std::to_string(line_no) +
                      ": node '" + tokens[0] +
                      "' has multiple labels (single-label data required)");
    }
    slot = cls_it->second;
  }
  return LabelMap(std::move(labels));
}

LabelMap read_label_file(const std::string& path, const IdMap& ids) {
  auto in = open_or_throw(path);
  return read_label_file(in, ids);
}

void write_edge_list(std::ostream& out, const Graph& g, const IdMap* ids) {
  for (const Edge& e : g.edges()) {
    if (ids != nullptr) {
      out << ids->token_of.at(e.u) << ' ' << ids->token_of.at(e.v) << '\n';
    } else {
      out << e.u << ' ' << e.v << '\n';
    }
  }
}

void write_edge_list_file(const std::string& path, const Graph& g,
                          const IdMap* ids) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  write_edge_list(out, g, ids);
}

LoadedGraph largest_component(const Graph& g, const IdMap& ids) {
  auto comp = connected_components(g);
  std::size_t num_comp = 0;
  for (auto c : comp) num_comp = std::max<std::size_t>(num_comp, c + 1);
  std::vector<std::size_t> sizes(num_comp, 0);
  for (auto c : comp) ++sizes[c];
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < num_comp; ++c) {
    if (sizes[c] > sizes[best]) best = c;
  }
  IdMap new_ids;
  std::vector<NodeId> remap(g.num_nodes(), 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (comp[v] == best) {
      remap[v] = new_ids.intern(v < ids.token_of.size() ? ids.token_of[v]
                                                        : std::to_string(v));
    }
  }
  Graph lcc(new_ids.token_of.size());
  for (const Edge& e : g.edges()) {
    if (comp[e.u] == best) lcc.add_edge(remap[e.u], remap[e.v]);
  }
  return LoadedGraph{std::move(lcc), std::move(new_ids), LoadWarnings{}};
}

}  // namespace nerb
