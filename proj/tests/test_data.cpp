#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <set>

#include <doctest.h>

#include "nerb/dataset.hpp"
#include "nerb/error.hpp"
#include "nerb/graph.hpp"

using namespace nerb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("nerb_data_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

// a labeled 5-node graph: triangle 0-1-2 plus chain 2-3-4
const char* kEdges = "a b\nb c\na c\nc d\nd e\n";
const char* kLabels = "a x\nb x\nc x\nd y\ne y\n";

DatasetDescriptor tiny_descriptor() {
  DatasetDescriptor d;
  d.name = "tiny";
  d.edge_file = {"http://unused.invalid/tiny.edges", "tiny.edges", ""};
  d.label_file = RemoteFile{"http://unused.invalid/tiny.labels", "tiny.labels", ""};
  d.expected.nodes = 5;
  d.expected.edges = 5;
  d.expected.labels = 2;
  d.expected.avg_degree = 2.0;
  return d;
}

}  // namespace

TEST_CASE("builtin registry covers the benchmark datasets") {
  const auto& all = builtin_datasets();
  CHECK(all.size() == 6);
  std::set<std::string> names;
  for (const auto& d : all) names.insert(d.name);
  for (const char* name :
       {"cora", "citeseer", "polblogs", "facebook", "iip", "studentdb"}) {
    CHECK(names.contains(name));
    CHECK(find_dataset(name).has_value());
  }
  CHECK_FALSE(find_dataset("nope").has_value());

  // the registry pins the published statistics used by the load gate
  const auto cora = find_dataset("cora");
  CHECK(cora->expected.nodes == 2485);
  CHECK(cora->expected.edges == 5069);
  CHECK(cora->expected.labels == 7);
  CHECK(cora->expected.avg_degree == doctest::Approx(4.08).epsilon(1e-9));
  CHECK(cora->expected.assortativity == doctest::Approx(-0.07).epsilon(1e-9));
}

TEST_CASE("sha256 of known vectors") {
  TempDir tmp;
  write_file(tmp.path / "empty", "");
  CHECK(sha256_file((tmp.path / "empty").string()) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  write_file(tmp.path / "abc", "abc");
  CHECK(sha256_file((tmp.path / "abc").string()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("dataset_cached and checksum pinning") {
  TempDir tmp;
  DatasetDescriptor d = tiny_descriptor();
  CHECK_FALSE(dataset_cached(d, tmp.path.string()));
  write_file(tmp.path / "tiny.edges", kEdges);
  CHECK_FALSE(dataset_cached(d, tmp.path.string()));  // labels still missing
  write_file(tmp.path / "tiny.labels", kLabels);
  CHECK(dataset_cached(d, tmp.path.string()));
}

TEST_CASE("load_dataset applies the expected-statistics gate") {
  TempDir tmp;
  write_file(tmp.path / "tiny.edges", kEdges);
  write_file(tmp.path / "tiny.labels", kLabels);

  SUBCASE("matching expectations load") {
    const LoadedDataset ds = load_dataset(tiny_descriptor(), tmp.path.string());
    CHECK(ds.graph.num_nodes() == 5);
    CHECK(ds.graph.num_edges() == 5);
    CHECK(ds.labels.num_classes() == 2);
    CHECK(ds.edge_checksum ==
          sha256_file((tmp.path / "tiny.edges").string()));
    CHECK(ds.ids.token_of.size() == 5);
  }
  SUBCASE("wrong node count is named in the error") {
    DatasetDescriptor d = tiny_descriptor();
    d.expected.nodes = 999;
    CHECK_THROWS_WITH_AS(load_dataset(d, tmp.path.string()),
                         doctest::Contains("nodes"), DataError);
  }
  SUBCASE("wrong average degree outside the 0.005 window") {
    DatasetDescriptor d = tiny_descriptor();
    d.expected.avg_degree = 2.01;
    CHECK_THROWS_WITH_AS(load_dataset(d, tmp.path.string()),
                         doctest::Contains("avg_degree"), DataError);
  }
  SUBCASE("average degree inside the window passes") {
    DatasetDescriptor d = tiny_descriptor();
    d.expected.avg_degree = 2.004;
    CHECK_NOTHROW(load_dataset(d, tmp.path.string()));
  }
  SUBCASE("wrong label count") {
    DatasetDescriptor d = tiny_descriptor();
    d.expected.labels = 3;
    CHECK_THROWS_WITH_AS(load_dataset(d, tmp.path.string()),
                         doctest::Contains("labels"), DataError);
  }
}

TEST_CASE("load_dataset extracts the largest component when asked") {
  TempDir tmp;
  // main component of 4 nodes plus an isolated pair
  write_file(tmp.path / "tiny.edges", "a b\nb c\nc d\na d\nx y\n");
  write_file(tmp.path / "tiny.labels", "a u\nb u\nc v\nd v\nx u\ny u\n");
  DatasetDescriptor d = tiny_descriptor();
  d.extract_lcc = true;
  d.expected.nodes = 4;
  d.expected.edges = 4;
  d.expected.labels = 2;
  d.expected.avg_degree = 2.0;
  const LoadedDataset ds = load_dataset(d, tmp.path.string());
  CHECK(ds.graph.num_nodes() == 4);
  CHECK(count_components(ds.graph) == 1);
}

TEST_CASE("manifest files declare extra datasets") {
  TempDir tmp;
  write_file(tmp.path / "manifest.json", R"([{
    "name": "extra",
    "edge_file": {"url": "http://unused.invalid/e.txt", "filename": "e.txt",
                  "sha256": "00ff"},
    "label_file": {"url": "http://unused.invalid/l.txt", "filename": "l.txt"},
    "extract_lcc": true,
    "expected": {"nodes": 10, "avg_degree": 2.5}
  }])");
  const auto parsed = read_dataset_manifest((tmp.path / "manifest.json").string());
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].name == "extra");
  CHECK(parsed[0].edge_file.sha256 == "00ff");
  REQUIRE(parsed[0].label_file.has_value());
  CHECK(parsed[0].label_file->filename == "l.txt");
  CHECK(parsed[0].extract_lcc);
  CHECK(parsed[0].expected.nodes == 10);
  CHECK(parsed[0].expected.avg_degree == doctest::Approx(2.5));
  CHECK_FALSE(parsed[0].expected.edges.has_value());
}

TEST_CASE("sbm generator") {
  SUBCASE("extreme probabilities give exact structure") {
    SbmSpec spec;
    spec.block_sizes = {5, 5};
    spec.p_in = 1.0;
    spec.p_out = 0.0;
    auto [g, labels] = sbm_generate(spec);
    CHECK(g.num_nodes() == 10);
    CHECK(g.num_edges() == 2 * 10);  // two K5s
    CHECK(count_components(g) == 2);
    CHECK(labels.num_classes() == 2);
    CHECK(homophily_ratio(g, labels) == 1.0);
  }
  SUBCASE("labels are block ids") {
    SbmSpec spec;
    spec.block_sizes = {3, 4, 5};
    spec.p_in = 0.5;
    spec.p_out = 0.1;
    spec.seed = 3;
    auto [g, labels] = sbm_generate(spec);
    CHECK(labels.num_classes() == 3);
    for (NodeId v = 0; v < 3; ++v) CHECK(labels.label(v) == 0);
    for (NodeId v = 3; v < 7; ++v) CHECK(labels.label(v) == 1);
    for (NodeId v = 7; v < 12; ++v) CHECK(labels.label(v) == 2);
  }
  SUBCASE("seeded generation is reproducible") {
    SbmSpec spec;
    spec.block_sizes = {20, 20};
    spec.p_in = 0.3;
    spec.p_out = 0.05;
    spec.seed = 17;
    auto [g1, l1] = sbm_generate(spec);
    auto [g2, l2] = sbm_generate(spec);
    CHECK(g1 == g2);
    spec.seed = 18;
    auto [g3, l3] = sbm_generate(spec);
    CHECK_FALSE(g1 == g3);
  }
  SUBCASE("edge count is near its binomial expectation") {
    SbmSpec spec;
    spec.block_sizes = {50, 50};
    spec.p_in = 0.2;
    spec.p_out = 0.02;
    spec.seed = 29;
    auto [g, labels] = sbm_generate(spec);
    // E = 2 * C(50,2) * 0.2 + 2500 * 0.02 = 490 + 50 = 540, sd ~ 21
    CHECK(g.num_edges() > 440);
    CHECK(g.num_edges() < 640);
  }
}

TEST_CASE("fully heterophilic SBM") {
  SbmSpec spec;
  spec.block_sizes = {6, 6};
  spec.p_in = 0.0;
  spec.p_out = 1.0;
  auto [g, labels] = sbm_generate(spec);
  CHECK(g.num_edges() == 36);  // complete bipartite
  CHECK(homophily_ratio(g, labels) == 0.0);
}
