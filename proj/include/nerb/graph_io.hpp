#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "nerb/graph.hpp"

namespace nerb {

// Mapping between source node tokens and dense ids, persisted alongside
// loaded graphs so external ids can be recovered.
struct IdMap {
  std::vector<std::string> token_of;                   // id -> token
  std::unordered_map<std::string, NodeId> id_of;       // token -> id

  NodeId intern(const std::string& token);
};

struct LoadWarnings {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

struct LoadedGraph {
  Graph graph;
  IdMap ids;
  LoadWarnings warnings;
};

// Edge-list format: one edge per line, two whitespace-separated node
// tokens; '#' lines are comments. Directed inputs are symmetrized;
// self-loops and duplicates are dropped and counted.
LoadedGraph read_edge_list(std::istream& in);
LoadedGraph read_edge_list_file(const std::string& path);

// Label format: "node_token<ws>label_token" per line, '#' comments.
// Label tokens are remapped to dense class ids in first-seen order.
// Tokens absent from `ids` are an error; a second, different label for
// the same node is rejected (single-label data only).
LabelMap read_label_file(std::istream& in, const IdMap& ids);
LabelMap read_label_file(const std::string& path, const IdMap& ids);

void write_edge_list(std::ostream& out, const Graph& g, const IdMap* ids = nullptr);
void write_edge_list_file(const std::string& path, const Graph& g,
                          const IdMap* ids = nullptr);

// Restriction of g to its largest connected component (ties broken by
// smallest component id). Node ids are re-densified; the returned IdMap
// composes the original tokens.
LoadedGraph largest_component(const Graph& g, const IdMap& ids);

}  // namespace nerb
