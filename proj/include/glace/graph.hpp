#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "glace/errors.hpp"

namespace glace {

/// One weighted edge record. For undirected graphs this is the edge as it
/// appeared in the input; the adjacency index materializes it as two arcs.
struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.src == b.src && a.dst == b.dst && a.weight == b.weight;
  }
};

/// Sparse attribute row: (column, value) pairs sorted by column, values
/// nonnegative (TF-IDF scale).
struct SparseRow {
  std::vector<std::pair<int, double>> nz;

  std::size_t nnz() const { return nz.size(); }
};

/// Immutable attributed graph: dense 0..n-1 node ids, weighted edge list,
/// CSR adjacency over arcs, and one sparse attribute row per node.
/// Undirected edges are stored as two directed arcs of equal weight.
/// Safe for concurrent reads once constructed.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  /// Validates everything: endpoint ranges, positive finite weights, one
  /// attribute row per node with columns inside [0, attr_dim), no duplicate
  /// arcs. `node_ids` maps dense index -> original token; pass empty to use
  /// decimal indices.
  AttributedGraph(int num_nodes, std::vector<Edge> edges, bool directed,
                  std::vector<SparseRow> attributes, int attr_dim,
                  std::vector<std::string> node_ids);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::int64_t num_arcs() const { return static_cast<std::int64_t>(arc_dst_.size()); }
  bool directed() const { return directed_; }
  int attr_dim() const { return attr_dim_; }

  const std::vector<Edge>& edges() const { return edges_; }

  /// Out-neighbors of v (arc view; sorted by destination).
  std::span<const int> neighbors(int v) const;
  std::span<const double> neighbor_weights(int v) const;

  /// Weighted out-degree: sum of outgoing arc weights.
  double out_degree(int v) const { return out_degree_[v]; }

  /// Arc membership (O(log deg)). For undirected graphs both orientations
  /// are present, so this doubles as edge membership.
  bool has_arc(int src, int dst) const;

  /// All arcs in CSR order. 2|E| entries for undirected graphs.
  std::vector<Edge> arcs() const;

  const SparseRow& attributes(int v) const { return attrs_[v]; }
  const std::vector<SparseRow>& attribute_rows() const { return attrs_; }

  const std::string& node_id(int v) const { return ids_[v]; }
  const std::vector<std::string>& node_ids() const { return ids_; }
  /// Dense index for an original id token, or -1 if unknown.
  int index_of(const std::string& id) const;

 private:
  int num_nodes_ = 0;
  int attr_dim_ = 0;
  bool directed_ = true;
  std::vector<Edge> edges_;
  std::vector<SparseRow> attrs_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> id_index_;
  // CSR over arcs
  std::vector<std::int64_t> row_ptr_;
  std::vector<int> arc_dst_;
  std::vector<double> arc_wgt_;
  std::vector<double> out_degree_;
};

/// Train/validation/test split of the edge set, with matched negatives.
struct EdgeSplit {
  std::vector<Edge> train_edges;
  std::vector<Edge> val_pos;
  std::vector<Edge> test_pos;
  std::vector<std::pair<int, int>> val_neg;
  std::vector<std::pair<int, int>> test_neg;
  std::uint64_t seed = 0;
  double test_frac = 0.0;
  double val_frac = 0.0;
};

/// Node-holdout split for inductive evaluation. The visible graph is
/// re-indexed to dense ids; mapping back to the original graph is retained.
struct InductiveSplit {
  AttributedGraph visible_graph;
  std::vector<int> hidden_nodes;            // original indices
  std::vector<SparseRow> hidden_attr;       // parallel to hidden_nodes
  std::vector<Edge> eval_pos;               // original indices
  std::vector<std::pair<int, int>> eval_neg;  // original indices
  std::vector<int> visible_to_original;
  std::vector<int> original_to_visible;     // -1 for hidden nodes
  std::uint64_t seed = 0;
  double frac = 0.0;
};

/// Load a graph from an edge file (`src dst [weight]`, `#` comments, weight
/// defaults to 1.0) and an attribute file (header `num_nodes D`, then either
/// `row col value` triplets or a `dense` line followed by CSV rows).
///
/// Node ids may be arbitrary tokens. When every token is a canonical integer
/// in [0, num_nodes), ids map to themselves; otherwise ids are densified in
/// order of first appearance (edge file first, then attribute triplets), and
/// the dense attribute format is rejected since row order would be undefined.
AttributedGraph load_graph(const std::filesystem::path& edge_path,
                           const std::filesystem::path& attr_path,
                           bool directed);

/// Uniform random edge split. Negatives are node pairs drawn uniformly by
/// rejection: no self-loops, no pair present in the original edge set, no
/// duplicates, |test_neg| = |test_pos| and |val_neg| = |val_pos|.
/// Deterministic given seed. Throws ValidationError when the graph is too
/// dense to supply enough non-edges within 100x the requested count of
/// attempts.
EdgeSplit split_edges(const AttributedGraph& g, double test_frac,
                      double val_frac, std::uint64_t seed);

/// Hide round(frac * num_nodes) uniformly chosen nodes: all incident edges
/// become eval positives, equally many non-edge pairs with at least one
/// hidden endpoint become eval negatives, and the remaining graph is
/// re-indexed. Throws ValidationError if no edges remain visible.
InductiveSplit hide_nodes(const AttributedGraph& g, double frac,
                          std::uint64_t seed);

/// Same nodes, ids and attributes; different edge list. Used to build the
/// training graph from a split.
AttributedGraph subgraph_with_edges(const AttributedGraph& g,
                                    std::vector<Edge> edges);

/// Plain-text split manifest so experiments are replayable across runs and
/// implementations. Edges are written with original id tokens.
void write_split_manifest(const std::filesystem::path& path,
                          const AttributedGraph& g, const EdgeSplit& split);
EdgeSplit read_split_manifest(const std::filesystem::path& path,
                              const AttributedGraph& g);

/// Node labels: `node_id label` lines. Returns one class index per node
/// (-1 when unlabeled) plus the sorted class-name table.
std::pair<std::vector<int>, std::vector<std::string>> load_labels(
    const std::filesystem::path& path, const AttributedGraph& g);

// Writers for the same formats (used by the synthetic-data tools).
void write_edge_file(const std::filesystem::path& path,
                     const AttributedGraph& g);
void write_attr_file(const std::filesystem::path& path,
                     const AttributedGraph& g);
void write_label_file(const std::filesystem::path& path,
                      const AttributedGraph& g, const std::vector<int>& labels,
                      const std::vector<std::string>& class_names);
void write_id_map(const std::filesystem::path& path, const AttributedGraph& g);

}  // namespace glace
