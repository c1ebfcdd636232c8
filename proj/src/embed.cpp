#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nerb/embedding.hpp"
#include "nerb/error.hpp"
#include "nerb/graph_io.hpp"

namespace nerb {

const char* to_string(EmbedMethod m) {
  switch (m) {
    case EmbedMethod::kDeepwalk:
      return "deepwalk";
    case EmbedMethod::kNode2vec:
      return "node2vec";
    case EmbedMethod::kHope:
      return "hope";
    case EmbedMethod::kNetmf:
      return "netmf";
    case EmbedMethod::kGrarep:
      return "grarep";
    case EmbedMethod::kExternal:
      return "external";
  }
  return "?";
}

std::optional<EmbedMethod> embed_method_from_string(const std::string& name) {
  for (EmbedMethod m :
       {EmbedMethod::kDeepwalk, EmbedMethod::kNode2vec, EmbedMethod::kHope,
        EmbedMethod::kNetmf, EmbedMethod::kGrarep, EmbedMethod::kExternal}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

namespace {

Embedding embed_walk_method(const Graph& g, const MethodConfig& cfg,
                            double p, double q, const char* name) {
  Rng rng(cfg.seed);
  WalkCorpus corpus =
      generate_walks(g, cfg.num_walks, cfg.walk_length, p, q, rng);
  Embedding e = skipgram_train(corpus, g.num_nodes(), cfg, rng);
  e.method_name = name;
  return e;
}

Embedding embed_external(const Graph& g, const MethodConfig& cfg) {
  if (cfg.external_command.empty()) {
    throw std::invalid_argument("external method needs a command");
  }
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() /
      ("nerb-ext-" + std::to_string(static_cast<unsigned long long>(
                         reinterpret_cast<std::uintptr_t>(&g) ^ cfg.seed)));
  fs::create_directories(dir);
  const fs::path edges = dir / "graph.edgelist";
  const fs::path out = dir / "embedding.txt";
  write_edge_list_file(edges.string(), g);
  std::ostringstream cmd;
  cmd << cfg.external_command << ' ' << edges << ' ' << out << ' ' << cfg.dim;
  const int rc = std::system(cmd.str().c_str());
  if (rc != 0) {
    throw std::runtime_error("external embedding command failed (exit " +
                             std::to_string(rc) + "): " + cmd.str());
  }
  std::ifstream in(out);
  if (!in) {
    throw std::runtime_error("external embedding produced no output file");
  }
  Embedding e = read_embedding(in);
  if (e.num_nodes() != static_cast<Eigen::Index>(g.num_nodes())) {
    throw std::runtime_error("external embedding row count mismatch");
  }
  e.method_name = "external";
  fs::remove_all(dir);
  return e;
}

}  // namespace

Embedding embed(const Graph& g, const MethodConfig& cfg) {
  if (cfg.dim < 1) throw std::invalid_argument("embed: dim must be >= 1");
  switch (cfg.method) {
    case EmbedMethod::kDeepwalk:
      return embed_walk_method(g, cfg, 1.0, 1.0, "deepwalk");
    case EmbedMethod::kNode2vec:
      return embed_walk_method(g, cfg, cfg.p, cfg.q, "node2vec");
    case EmbedMethod::kHope:
      return hope_embed(g, cfg.dim, cfg.katz_beta);
    case EmbedMethod::kNetmf:
      return netmf_embed(g, cfg.dim, cfg.netmf_window, cfg.netmf_negatives);
    case EmbedMethod::kGrarep:
      return grarep_embed(g, cfg.dim, cfg.grarep_k);
    case EmbedMethod::kExternal:
      return embed_external(g, cfg);
  }
  throw std::invalid_argument("unknown embedding method");
}

void write_embedding(std::ostream& out, const Embedding& e) {
  out << e.num_nodes() << ' ' << e.dim() << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < e.num_nodes(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < e.dim(); ++j) out << ' ' << e.x(i, j);
    out << '\n';
  }
}

Embedding read_embedding(std::istream& in) {
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d)) throw DataError("embedding: bad header");
  Eigen::MatrixXd x(n, d);
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t id = 0;
    if (!(in >> id) || id >= n) {
      throw DataError("embedding: bad node id on row " + std::to_string(row));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!(in >> x(id, j))) throw DataError("embedding: truncated row");
    }
  }
  return Embedding{std::move(x), "loaded"};
}

void write_embedding_binary(std::ostream& out, const Embedding& e) {
  const std::uint64_t n = static_cast<std::uint64_t>(e.num_nodes());
  const std::uint64_t d = static_cast<std::uint64_t>(e.dim());
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  for (Eigen::Index i = 0; i < e.num_nodes(); ++i) {
    for (Eigen::Index j = 0; j < e.dim(); ++j) {
      const double v = e.x(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
}

Embedding read_embedding_binary(std::istream& in) {
  std::uint64_t n = 0, d = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  if (!in) throw DataError("binary embedding: bad header");
  Eigen::MatrixXd x(n, d);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < d; ++j) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      if (!in) throw DataError("binary embedding: truncated");
      x(i, j) = v;
    }
  }
  return Embedding{std::move(x), "loaded"};
}

}  // namespace nerb
