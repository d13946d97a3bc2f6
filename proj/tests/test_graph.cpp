#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "glace/errors.hpp"
#include "glace/graph.hpp"
#include "glace/synth.hpp"
#include "support/tmpdir.hpp"

using namespace glace;

TEST_SUITE_BEGIN("graph");

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

using PairSet = std::set<std::pair<int, int>>;

PairSet edge_pairs(const std::vector<Edge>& edges, bool directed) {
  PairSet s;
  for (const Edge& e : edges) {
    if (directed)
      s.insert({e.src, e.dst});
    else
      s.insert({std::min(e.src, e.dst), std::max(e.src, e.dst)});
  }
  return s;
}

}  // namespace

TEST_CASE("load: triplet attrs, comments, default weight") {
  TmpDir dir("load");
  write_file(dir / "g.edges",
             "# a comment\n"
             "0 1\n"
             "1 2 2.5  # trailing comment\n");
  write_file(dir / "g.attrs",
             "3 4\n"
             "0 0 1.0\n"
             "2 3 0.5\n");
  const auto g = load_graph(dir / "g.edges", dir / "g.attrs", false);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.num_arcs() == 4);
  CHECK(g.attr_dim() == 4);
  CHECK(g.edges()[0].weight == 1.0);
  CHECK(g.edges()[1].weight == 2.5);
  CHECK(g.attributes(0).nz.size() == 1);
  CHECK(g.attributes(1).nz.empty());
  CHECK(g.out_degree(1) == doctest::Approx(3.5));
}

TEST_CASE("load: empty edge file with 3 attribute rows gives 3 isolated nodes") {
  TmpDir dir("empty");
  write_file(dir / "g.edges", "");
  write_file(dir / "g.attrs",
             "3 2\n"
             "dense\n"
             "1.0,0.0\n"
             "0.5,0.5\n"
             "0.0,2.0\n");
  const auto g = load_graph(dir / "g.edges", dir / "g.attrs", false);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 0);
  CHECK(g.attributes(1).nz.size() == 2);
}

TEST_CASE("load: nonpositive weight is a validation error") {
  TmpDir dir("negw");
  write_file(dir / "g.edges", "0 1 -2.0\n");
  write_file(dir / "g.attrs", "2 1\n0 0 1.0\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false),
                  ValidationError);
  write_file(dir / "g.edges", "0 1 0\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false),
                  ValidationError);
}

TEST_CASE("load: malformed line reports its line number") {
  TmpDir dir("mal");
  write_file(dir / "g.edges", "0 1\n0 1 2 3\n");
  write_file(dir / "g.attrs", "2 1\n0 0 1.0\n");
  try {
    load_graph(dir / "g.edges", dir / "g.attrs", false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  write_file(dir / "g.edges", "0 1 not_a_number\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false), ParseError);
}

TEST_CASE("load: attribute/node count mismatch") {
  TmpDir dir("mismatch");
  write_file(dir / "g.edges", "0 1\n1 2\n");  // three distinct nodes
  write_file(dir / "g.attrs", "2 1\n0 0 1.0\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false),
                  ValidationError);
}

TEST_CASE("load: string ids densify by first appearance") {
  TmpDir dir("strid");
  write_file(dir / "g.edges", "paperB paperA\npaperA paperC\n");
  write_file(dir / "g.attrs",
             "3 2\n"
             "paperA 0 1.0\n"
             "paperB 1 2.0\n"
             "paperC 0 0.5\n");
  const auto g = load_graph(dir / "g.edges", dir / "g.attrs", false);
  CHECK(g.num_nodes() == 3);
  CHECK(g.node_id(0) == "paperB");
  CHECK(g.node_id(1) == "paperA");
  CHECK(g.index_of("paperC") == 2);
  CHECK(g.index_of("paperZ") == -1);
  CHECK(g.attributes(1).nz[0].second == 1.0);
}

TEST_CASE("load: dense rows with string ids are rejected") {
  TmpDir dir("strdense");
  write_file(dir / "g.edges", "a b\n");
  write_file(dir / "g.attrs", "2 1\ndense\n1.0\n2.0\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false),
                  ValidationError);
}

TEST_CASE("load: duplicate edges are rejected") {
  TmpDir dir("dup");
  write_file(dir / "g.attrs", "2 1\n0 0 1.0\n");
  write_file(dir / "g.edges", "0 1\n0 1 2.0\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false),
                  ValidationError);
  // both orientations of one undirected edge collide as arcs
  write_file(dir / "g.edges", "0 1\n1 0\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs", false),
                  ValidationError);
  // but they are two distinct arcs when the graph is directed
  const auto g = load_graph(dir / "g.edges", dir / "g.attrs", true);
  CHECK(g.num_edges() == 2);
}

TEST_CASE("csr round-trip reproduces the edge multiset") {
  const auto data = make_citation_graph(citation_preset("demo"));
  const AttributedGraph& g = data.graph;
  std::multiset<std::tuple<int, int, double>> from_edges, from_csr;
  for (const Edge& e : g.edges()) {
    from_edges.insert({e.src, e.dst, e.weight});
    from_edges.insert({e.dst, e.src, e.weight});  // undirected: both arcs
  }
  for (int v = 0; v < g.num_nodes(); ++v) {
    const auto nb = g.neighbors(v);
    const auto wt = g.neighbor_weights(v);
    for (std::size_t k = 0; k < nb.size(); ++k)
      from_csr.insert({v, nb[k], wt[k]});
  }
  CHECK(from_edges == from_csr);
  CHECK(static_cast<std::int64_t>(from_csr.size()) == g.num_arcs());
}

TEST_CASE("split: sizes, reassembly, and negative validity") {
  const auto data = make_citation_graph(citation_preset("demo"));
  const AttributedGraph& g = data.graph;
  const auto split = split_edges(g, 0.2, 0.05, 7);

  const auto m = static_cast<double>(g.num_edges());
  CHECK(split.test_pos.size() == static_cast<std::size_t>(std::llround(0.2 * m)));
  CHECK(split.val_pos.size() == static_cast<std::size_t>(std::llround(0.05 * m)));
  CHECK(split.test_neg.size() == split.test_pos.size());
  CHECK(split.val_neg.size() == split.val_pos.size());
  CHECK(split.train_edges.size() + split.val_pos.size() + split.test_pos.size() ==
        g.edges().size());

  // Reassembling the three parts reproduces the original edge multiset.
  std::multiset<std::tuple<int, int, double>> original, reassembled;
  for (const Edge& e : g.edges()) original.insert({e.src, e.dst, e.weight});
  for (const auto* part : {&split.train_edges, &split.val_pos, &split.test_pos})
    for (const Edge& e : *part) reassembled.insert({e.src, e.dst, e.weight});
  CHECK(original == reassembled);

  // No negative is an edge, a self loop, or a duplicate.
  const PairSet edges = edge_pairs(g.edges(), g.directed());
  PairSet negs;
  for (const auto* part : {&split.test_neg, &split.val_neg}) {
    for (const auto& [i, j] : *part) {
      CHECK(i != j);
      const auto key = std::pair{std::min(i, j), std::max(i, j)};
      CHECK(edges.count(key) == 0);
      CHECK(negs.insert(key).second);
    }
  }
}

TEST_CASE("split: deterministic given the seed") {
  const auto data = make_citation_graph(citation_preset("demo"));
  const auto a = split_edges(data.graph, 0.2, 0.1, 99);
  const auto b = split_edges(data.graph, 0.2, 0.1, 99);
  CHECK(a.train_edges == b.train_edges);
  CHECK(a.test_pos == b.test_pos);
  CHECK(a.val_neg == b.val_neg);
  CHECK(a.test_neg == b.test_neg);
  const auto c = split_edges(data.graph, 0.2, 0.1, 100);
  CHECK(a.test_pos != c.test_pos);
}

TEST_CASE("split: complete graph exhausts the non-edge supply") {
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) edges.push_back({i, j, 1.0});
  std::vector<SparseRow> attrs(4);
  const AttributedGraph g(4, std::move(edges), false, std::move(attrs), 1, {});
  CHECK_THROWS_AS(split_edges(g, 0.2, 0.0, 1), ValidationError);
}

TEST_CASE("split: parameter validation") {
  const auto data = make_sbm(10, 2, 0.8, 0.1, 5);
  CHECK_THROWS_AS(split_edges(data.graph, 0.0, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(split_edges(data.graph, 1.0, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(split_edges(data.graph, 0.6, 0.5, 1), ValidationError);
  std::vector<SparseRow> attrs(2);
  const AttributedGraph empty(2, {}, false, std::move(attrs), 1, {});
  CHECK_THROWS_AS(split_edges(empty, 0.2, 0.0, 1), ValidationError);
}

TEST_CASE("hide_nodes: counts, incident edges, reindexing") {
  const auto data = make_citation_graph(citation_preset("demo"));
  const AttributedGraph& g = data.graph;
  const auto ind = hide_nodes(g, 0.1, 13);

  CHECK(ind.hidden_nodes.size() ==
        static_cast<std::size_t>(std::llround(0.1 * g.num_nodes())));
  CHECK(ind.visible_graph.num_nodes() ==
        g.num_nodes() - static_cast<int>(ind.hidden_nodes.size()));

  std::set<int> hidden(ind.hidden_nodes.begin(), ind.hidden_nodes.end());
  for (const Edge& e : ind.eval_pos)
    CHECK((hidden.count(e.src) || hidden.count(e.dst)));
  for (const Edge& e : ind.visible_graph.edges()) {
    CHECK(hidden.count(ind.visible_to_original[e.src]) == 0);
    CHECK(hidden.count(ind.visible_to_original[e.dst]) == 0);
  }
  // visible + hidden-incident edges partition the original edge set
  CHECK(ind.visible_graph.num_edges() + static_cast<int>(ind.eval_pos.size()) ==
        g.num_edges());
  CHECK(ind.eval_neg.size() == ind.eval_pos.size());

  const PairSet edges = edge_pairs(g.edges(), g.directed());
  for (const auto& [i, j] : ind.eval_neg) {
    CHECK(i != j);
    CHECK((hidden.count(i) || hidden.count(j)));
    CHECK(edges.count({std::min(i, j), std::max(i, j)}) == 0);
  }

  // attribute rows travel with the re-indexing
  for (int v = 0; v < ind.visible_graph.num_nodes(); ++v) {
    const int orig = ind.visible_to_original[v];
    CHECK(ind.visible_graph.attributes(v).nz == g.attributes(orig).nz);
    CHECK(ind.visible_graph.node_id(v) == g.node_id(orig));
  }
  for (std::size_t k = 0; k < ind.hidden_nodes.size(); ++k)
    CHECK(ind.hidden_attr[k].nz == g.attributes(ind.hidden_nodes[k]).nz);
}

TEST_CASE("hide_nodes: reproducible and validated") {
  const auto data = make_citation_graph(citation_preset("demo"));
  const auto a = hide_nodes(data.graph, 0.25, 3);
  const auto b = hide_nodes(data.graph, 0.25, 3);
  CHECK(a.hidden_nodes == b.hidden_nodes);
  CHECK(a.eval_neg == b.eval_neg);
  CHECK_THROWS_AS(hide_nodes(data.graph, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(hide_nodes(data.graph, 1.0, 1), ValidationError);

  // Hiding nearly everything leaves no visible edges.
  const auto tiny = make_sbm(6, 2, 1.0, 1.0, 2);
  CHECK_THROWS_AS(hide_nodes(tiny.graph, 0.9, 1), ValidationError);
}

TEST_CASE("subgraph_with_edges keeps nodes and attributes") {
  const auto data = make_sbm(12, 3, 0.7, 0.1, 9);
  const auto& g = data.graph;
  std::vector<Edge> keep(g.edges().begin(), g.edges().begin() + 3);
  const auto sub = subgraph_with_edges(g, keep);
  CHECK(sub.num_nodes() == g.num_nodes());
  CHECK(sub.num_edges() == 3);
  CHECK(sub.attributes(5).nz == g.attributes(5).nz);
}

TEST_CASE("split manifest round-trips exactly") {
  TmpDir dir("manifest");
  const auto data = make_citation_graph(citation_preset("demo"));
  const auto split = split_edges(data.graph, 0.2, 0.05, 21);
  write_split_manifest(dir / "split.txt", data.graph, split);
  const auto back = read_split_manifest(dir / "split.txt", data.graph);
  CHECK(back.seed == split.seed);
  CHECK(back.train_edges == split.train_edges);
  CHECK(back.val_pos == split.val_pos);
  CHECK(back.val_neg == split.val_neg);
  CHECK(back.test_pos == split.test_pos);
  CHECK(back.test_neg == split.test_neg);
}

TEST_CASE("label file loads through the id map") {
  TmpDir dir("labels");
  write_file(dir / "g.edges", "0 1\n1 2\n");
  write_file(dir / "g.attrs", "3 1\n0 0 1.0\n");
  write_file(dir / "g.labels", "0 ml\n1 db\n2 ml\n");
  const auto g = load_graph(dir / "g.edges", dir / "g.attrs", false);
  const auto [labels, names] = load_labels(dir / "g.labels", g);
  CHECK(names == std::vector<std::string>{"db", "ml"});
  CHECK(labels == std::vector<int>{1, 0, 1});

  write_file(dir / "bad.labels", "7 ml\n");
  CHECK_THROWS_AS(load_labels(dir / "bad.labels", g), ValidationError);
}

TEST_SUITE_END();
