#include "nerb/dataset.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <nlohmann/json.hpp>

#include "nerb/error.hpp"

namespace nerb {

namespace fs = std::filesystem;

namespace {

// The circulated preprocessed variants (largest connected component for the
// citation networks, symmetrized simple graph for PolBlogs). The registry
// can be replaced via a JSON manifest when mirrors move; unpinned checksums
// are recorded next to the file on first fetch.
const char* kMirrorBase =
    "https://raw.githubusercontent.com/aida-ugent/EvalNE-robustness/master/data";

std::vector<DatasetDescriptor> make_builtin() {
  auto remote = [](const std::string& name, const char* suffix) {
    return RemoteFile{std::string(kMirrorBase) + "/" + name + "/" + name +
                          suffix,
                      name + std::string(suffix), ""};
  };
  std::vector<DatasetDescriptor> out;
  out.push_back({"cora", remote("cora", ".edgelist"),
                 remote("cora", ".labels"), true,
                 {2485, 5069, 7, 4.08, -0.07}});
  out.push_back({"citeseer", remote("citeseer", ".edgelist"),
                 remote("citeseer", ".labels"), true,
                 {2110, 3668, 6, 3.48, 0.01}});
  out.push_back({"polblogs", remote("polblogs", ".edgelist"), std::nullopt,
                 true, {1222, 16714, std::nullopt, 27.35, -0.22}});
  out.push_back({"facebook", remote("facebook", ".edgelist"), std::nullopt,
                 false, {4039, 88234, std::nullopt, 43.69, 0.06}});
  out.push_back({"iip", remote("iip", ".edgelist"), remote("iip", ".labels"),
                 false, {219, 630, 3, 5.75, -0.22}});
  out.push_back({"studentdb", remote("studentdb", ".edgelist"),
                 remote("studentdb", ".labels"), false,
                 {395, 3423, 7, 17.33, -0.34}});
  return out;
}

std::optional<RemoteFile> parse_remote(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  RemoteFile f;
  f.url = j.at("url").get<std::string>();
  f.filename = j.at("filename").get<std::string>();
  if (j.contains("sha256")) f.sha256 = j["sha256"].get<std::string>();
  return f;
}

// Scoped advisory lock (create-exclusive lock file) so concurrent fetches
// of one dataset serialize. Locks older than 10 minutes count as abandoned.
class CacheLock {
 public:
  explicit CacheLock(const fs::path& path) : path_(path) {
    for (int i = 0; i < 600; ++i) {
      const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd >= 0) {
        ::close(fd);
        held_ = true;
        return;
      }
      std::error_code ec;
      const auto t = fs::last_write_time(path_, ec);
      if (!ec &&
          fs::file_time_type::clock::now() - t > std::chrono::minutes(10)) {
        fs::remove(path_, ec);
        continue;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    throw DataError("could not acquire cache lock: " + path_.string());
  }
  ~CacheLock() {
    if (held_) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }

 private:
  fs::path path_;
  bool held_ = false;
};

void download_to(const std::string& url, const fs::path& dest) {
  // split scheme://host/path
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DataError("bad url: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string host = url.substr(scheme_end + 3,
                                      path_start - scheme_end - 3);
  const std::string path =
      path_start == std::string::npos ? "/" : url.substr(path_start);

  std::string body;
  std::string error = "unreachable";
  for (int attempt = 0; attempt < 3; ++attempt) {
    httplib::Result res = [&] {
      if (scheme == "https") {
        httplib::SSLClient client(host);
        client.set_follow_location(true);
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
        return client.Get(path);
      }
      httplib::Client client(host);
      client.set_follow_location(true);
      client.set_connection_timeout(10);
      client.set_read_timeout(60);
      return client.Get(path);
    }();
    if (res && res->status == 200) {
      body = res->body;
      error.clear();
      break;
    }
    error = res ? "http status " + std::to_string(res->status)
                : httplib::to_string(res.error());
  }
  if (!error.empty()) {
    throw DataError("download failed after 3 attempts (" + error +
                    "): " + url);
  }
  std::ofstream out(dest, std::ios::binary);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw DataError("cannot write " + dest.string());
}

void fetch_file(const RemoteFile& file, const fs::path& dir) {
  const fs::path dest = dir / file.filename;
  const fs::path digest_file = dest.string() + ".sha256";
  if (fs::exists(dest)) {
    const std::string digest = sha256_file(dest.string());
    std::string pinned = file.sha256;
    if (pinned.empty() && fs::exists(digest_file)) {
      std::ifstream in(digest_file);
      in >> pinned;
    }
    if (!pinned.empty() && pinned != digest) {
      throw DataError("checksum mismatch for " + dest.string() +
                      ": expected " + pinned + ", got " + digest);
    }
    return;  // cache hit
  }
  download_to(file.url, dest);
  const std::string digest = sha256_file(dest.string());
  if (!file.sha256.empty() && digest != file.sha256) {
    fs::remove(dest);
    throw DataError("checksum mismatch for " + file.url + ": expected " +
                    file.sha256 + ", got " + digest);
  }
  std::ofstream(digest_file) << digest << '\n';
}

void check_stat(const std::string& dataset, const std::string& stat,
                double got, double expected, double tol) {
  if (std::abs(got - expected) > tol) {
    std::ostringstream msg;
    msg << dataset << ": statistic '" << stat << "' is " << got
        << ", expected " << expected << " (tolerance " << tol << ")";
    throw DataError(msg.str());
  }
}

}  // namespace

const std::vector<DatasetDescriptor>& builtin_datasets() {
  static const std::vector<DatasetDescriptor> registry = make_builtin();
  return registry;
}

std::optional<DatasetDescriptor> find_dataset(const std::string& name) {
  for (const auto& d : builtin_datasets()) {
    if (d.name == name) return d;
  }
  return std::nullopt;
}

std::vector<DatasetDescriptor> read_dataset_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  nlohmann::json j;
  in >> j;
  std::vector<DatasetDescriptor> out;
  const auto& list = j.is_array() ? j : j.at("datasets");
  for (const auto& entry : list) {
    DatasetDescriptor d;
    d.name = entry.at("name").get<std::string>();
    d.edge_file = *parse_remote(entry.at("edge_file"));
    if (entry.contains("label_file") && !entry["label_file"].is_null()) {
      d.label_file = parse_remote(entry["label_file"]);
    }
    d.extract_lcc = entry.value("extract_lcc", false);
    const nlohmann::json ex = entry.value("expected", nlohmann::json::object());
    if (ex.contains("nodes")) d.expected.nodes = ex["nodes"].get<std::size_t>();
    if (ex.contains("edges")) d.expected.edges = ex["edges"].get<std::size_t>();
    if (ex.contains("labels")) d.expected.labels = ex["labels"].get<int>();
    if (ex.contains("avg_degree")) {
      d.expected.avg_degree = ex["avg_degree"].get<double>();
    }
    if (ex.contains("assortativity")) {
      d.expected.assortativity = ex["assortativity"].get<double>();
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("NERB_CACHE_DIR")) return env;
  if (const char* home = std::getenv("HOME")) {
    return std::string(home) + "/.cache/nerb";
  }
  return "./.nerb-cache";
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for hashing: " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

bool dataset_cached(const DatasetDescriptor& desc,
                    const std::string& cache_dir) {
  const fs::path dir(cache_dir);
  if (!fs::exists(dir / desc.edge_file.filename)) return false;
  if (desc.label_file && !fs::exists(dir / desc.label_file->filename)) {
    return false;
  }
  return true;
}

void fetch_dataset(const DatasetDescriptor& desc,
                   const std::string& cache_dir) {
  const fs::path dir(cache_dir);
  fs::create_directories(dir);
  CacheLock lock(dir / (desc.name + ".lock"));
  fetch_file(desc.edge_file, dir);
  if (desc.label_file) fetch_file(*desc.label_file, dir);
}

LoadedDataset load_dataset(const DatasetDescriptor& desc,
                           const std::string& cache_dir) {
  const fs::path dir(cache_dir);
  const fs::path edge_path = dir / desc.edge_file.filename;
  if (!fs::exists(edge_path)) {
    throw DataError("dataset '" + desc.name +
                    "' not cached; run fetch first (" + edge_path.string() +
                    ")");
  }
  LoadedGraph loaded = read_edge_list_file(edge_path.string());
  LabelMap labels;
  if (desc.label_file) {
    labels = read_label_file((dir / desc.label_file->filename).string(),
                             loaded.ids);
  }
  if (desc.extract_lcc) {
    LoadedGraph lcc = largest_component(loaded.graph, loaded.ids);
    if (desc.label_file) {
      std::vector<int> remapped(lcc.graph.num_nodes(), LabelMap::kNoLabel);
      for (NodeId v = 0; v < lcc.graph.num_nodes(); ++v) {
        const auto& token = lcc.ids.token_of[v];
        remapped[v] = labels.label(loaded.ids.id_of.at(token));
      }
      labels = LabelMap(std::move(remapped));
    }
    loaded.graph = std::move(lcc.graph);
    loaded.ids = std::move(lcc.ids);
  }

  // Table-driven gate: exact counts, <k> and r within +-0.005.
  const Graph& g = loaded.graph;
  if (desc.expected.nodes && g.num_nodes() != *desc.expected.nodes) {
    throw DataError(desc.name + ": statistic 'nodes' is " +
                    std::to_string(g.num_nodes()) + ", expected " +
                    std::to_string(*desc.expected.nodes));
  }
  if (desc.expected.edges && g.num_edges() != *desc.expected.edges) {
    throw DataError(desc.name + ": statistic 'edges' is " +
                    std::to_string(g.num_edges()) + ", expected " +
                    std::to_string(*desc.expected.edges));
  }
  if (desc.expected.labels && labels.num_classes() != *desc.expected.labels) {
    throw DataError(desc.name + ": statistic 'labels' is " +
                    std::to_string(labels.num_classes()) + ", expected " +
                    std::to_string(*desc.expected.labels));
  }
  if (desc.expected.avg_degree) {
    check_stat(desc.name, "avg_degree",
               2.0 * static_cast<double>(g.num_edges()) /
                   static_cast<double>(g.num_nodes()),
               *desc.expected.avg_degree, 0.005);
  }
  if (desc.expected.assortativity) {
    check_stat(desc.name, "assortativity", graph_assortativity(g),
               *desc.expected.assortativity, 0.005);
  }
  LoadedDataset out{std::move(loaded.graph), std::move(labels),
                    std::move(loaded.ids), sha256_file(edge_path.string())};
  return out;
}

std::pair<Graph, LabelMap> sbm_generate(const SbmSpec& spec) {
  if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 ||
      spec.p_out > 1.0) {
    throw std::invalid_argument("sbm: probabilities must be in [0, 1]");
  }
  std::size_t n = 0;
  for (std::size_t b : spec.block_sizes) n += b;
  if (n < 2) throw std::invalid_argument("sbm: need at least 2 nodes");
  std::vector<int> block_of(n);
  std::size_t offset = 0;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    for (std::size_t i = 0; i < spec.block_sizes[b]; ++i) {
      block_of[offset + i] = static_cast<int>(b);
    }
    offset += spec.block_sizes[b];
  }
  Rng rng(spec.seed);
  Graph g(n);
  for (NodeId a = 0; a + 1 < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const double p = block_of[a] == block_of[b] ? spec.p_in : spec.p_out;
      if (p >= 1.0 || (p > 0.0 && rng.uniform() < p)) g.add_edge(a, b);
    }
  }
  return {std::move(g), LabelMap(std::move(block_of))};
}

}  // namespace nerb
