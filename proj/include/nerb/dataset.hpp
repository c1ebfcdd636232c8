#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nerb/graph.hpp"
#include "nerb/graph_io.hpp"
#include "nerb/rng.hpp"

namespace nerb {

struct ExpectedStats {
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> edges;
  std::optional<int> labels;
  std::optional<double> avg_degree;     // checked within +-0.005
  std::optional<double> assortativity;  // checked within +-0.005
};

struct RemoteFile {
  std::string url;
  std::string filename;  // name inside the cache directory
  std::string sha256;    // empty = pin on first successful fetch
};

struct DatasetDescriptor {
  std::string name;
  RemoteFile edge_file;
  std::optional<RemoteFile> label_file;
  bool extract_lcc = false;  // reduce to the largest connected component
  ExpectedStats expected;
};

// Built-in descriptor registry (Cora, Citeseer, PolBlogs, Facebook, IIP,
// StudentDB); extendable via a JSON manifest with the same fields.
const std::vector<DatasetDescriptor>& builtin_datasets();
std::optional<DatasetDescriptor> find_dataset(const std::string& name);
std::vector<DatasetDescriptor> read_dataset_manifest(const std::string& path);

// Cache directory: $NERB_CACHE_DIR or ~/.cache/nerb.
std::string default_cache_dir();

// Idempotent download into the cache; checksums verified when pinned and
// recorded alongside the file otherwise. Throws DataError on checksum
// mismatch or after 3 failed attempts per file.
void fetch_dataset(const DatasetDescriptor& desc, const std::string& cache_dir);

// True when every file of the dataset is present in the cache.
bool dataset_cached(const DatasetDescriptor& desc, const std::string& cache_dir);

// Hex SHA-256 of a file's contents.
std::string sha256_file(const std::string& path);

struct LoadedDataset {
  Graph graph;
  LabelMap labels;  // empty (size 0 classes) when the dataset is unlabeled
  IdMap ids;
  std::string edge_checksum;
};

// Parses cached files, optionally reduces to the LCC, and applies the
// expected-statistics gate (nodes/edges/labels exact, <k> and r within
// +-0.005). Throws DataError naming the offending statistic.
LoadedDataset load_dataset(const DatasetDescriptor& desc,
                           const std::string& cache_dir);

// ---------------------------------------------------------------------------
// synthetic stand-ins

struct SbmSpec {
  std::vector<std::size_t> block_sizes;
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;
};

// Each unordered pair sampled independently with p_in (same block) or
// p_out; labels are block ids.
std::pair<Graph, LabelMap> sbm_generate(const SbmSpec& spec);

}  // namespace nerb
