#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glace/graph.hpp"

namespace glace {

/// Generator for citation-style attributed graphs: power-law-ish degrees,
/// community structure, and sparse class-correlated bag-of-words attributes
/// on a TF-IDF-like scale. Used for benchmarks and tests; fully deterministic
/// given the seed.
struct CitationConfig {
  int num_nodes = 1000;
  int num_edges = 3000;
  int attr_dim = 1500;
  int num_classes = 5;
  double intra_class_edge_frac = 0.90;  // edges landing inside one class
  double topic_word_frac = 0.62;        // a node's words drawn from its class topics
  double attr_noise_frac = 0.12;        // nodes whose words come from a wrong class
  int min_words = 12;
  int max_words = 42;
  double degree_alpha = 2.6;  // Pareto tail index of the degree propensity
  std::uint64_t seed = 7;
};

struct SyntheticDataset {
  AttributedGraph graph;  // undirected
  std::vector<int> labels;
  std::vector<std::string> class_names;
};

SyntheticDataset make_citation_graph(const CitationConfig& config);

/// Presets shaped like well-known citation benchmarks (node/edge/attribute
/// counts); the content itself is generated.
/// Known names: "cora_ml", "citeseer", "demo".
CitationConfig citation_preset(std::string_view name);

/// Plain stochastic block model with one-hot(ish) attributes; handy for
/// small deterministic unit fixtures.
SyntheticDataset make_sbm(int num_nodes, int num_blocks, double p_in,
                          double p_out, std::uint64_t seed);

/// Write edge/attr/label files for a dataset under `dir` with the given stem.
/// Returns the three paths (edges, attrs, labels).
std::vector<std::filesystem::path> write_dataset(
    const SyntheticDataset& data, const std::filesystem::path& dir,
    const std::string& stem);

}  // namespace glace
