#include "glace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "glace/errors.hpp"
#include "glace/rng.hpp"
#include "glace/sampler.hpp"

namespace glace {

namespace {

std::int64_t pair_key(int i, int j, int n) {
  return static_cast<std::int64_t>(std::min(i, j)) * n + std::max(i, j);
}

// Zipf-ish pick in [0, size): quadratic skew toward low ranks.
int skewed_pick(Rng& rng, int size) {
  const double u = rng.uniform01();
  int k = static_cast<int>(u * u * size);
  return std::min(k, size - 1);
}

}  // namespace

SyntheticDataset make_citation_graph(const CitationConfig& cfg) {
  if (cfg.num_nodes < cfg.num_classes || cfg.num_classes < 2)
    throw ValidationError("citation generator needs num_nodes >= num_classes >= 2");
  if (cfg.attr_dim < 2 * cfg.num_classes)
    throw ValidationError("attribute dimension too small for the class topics");
  if (cfg.min_words < 1 || cfg.max_words < cfg.min_words)
    throw ValidationError("invalid word count range");

  const int n = cfg.num_nodes;
  const int K = cfg.num_classes;
  Rng rng(derive_seed(cfg.seed, "citation"));

  // Mildly imbalanced class sizes, then shuffled over node ids.
  std::vector<int> labels(n);
  {
    std::vector<double> w(K);
    for (int c = 0; c < K; ++c) w[c] = 1.0 + 0.6 * c / std::max(1, K - 1);
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    int filled = 0;
    for (int c = 0; c < K; ++c) {
      int cnt = c + 1 < K ? static_cast<int>(w[c] / wsum * n) : n - filled;
      cnt = std::max(cnt, 1);
      for (int k = 0; k < cnt && filled < n; ++k) labels[filled++] = c;
    }
    for (int k = n; k > 1; --k)
      std::swap(labels[k - 1], labels[rng.uniform_below(k)]);
  }

  // Pareto-ish degree propensity, capped.
  std::vector<double> theta(n);
  for (int i = 0; i < n; ++i) {
    const double u = std::max(rng.uniform01(), 1e-9);
    theta[i] = std::min(std::pow(u, -1.0 / (cfg.degree_alpha - 1.0)), 60.0);
  }

  std::vector<std::vector<int>> members(K);
  for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);
  std::vector<AliasTable> class_pick(K);
  std::vector<double> class_mass(K);
  for (int c = 0; c < K; ++c) {
    std::vector<double> w(members[c].size());
    for (std::size_t k = 0; k < members[c].size(); ++k)
      w[k] = theta[members[c][k]];
    class_pick[c] = AliasTable::build(w);
    class_mass[c] = std::accumulate(w.begin(), w.end(), 0.0);
  }
  const AliasTable class_table = AliasTable::build(class_mass);
  const AliasTable global_pick = AliasTable::build(theta);

  std::vector<Edge> edges;
  edges.reserve(cfg.num_edges);
  std::unordered_set<std::int64_t> seen;
  seen.reserve(cfg.num_edges * 2);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 200 * static_cast<std::size_t>(cfg.num_edges);
  while (static_cast<int>(edges.size()) < cfg.num_edges) {
    if (++attempts > max_attempts)
      throw ValidationError("citation generator could not place all edges");
    int a, b;
    if (rng.uniform01() < cfg.intra_class_edge_frac) {
      const int c = class_table.draw(rng);
      if (members[c].size() < 2) continue;
      a = members[c][class_pick[c].draw(rng)];
      b = members[c][class_pick[c].draw(rng)];
    } else {
      a = global_pick.draw(rng);
      b = global_pick.draw(rng);
      if (labels[a] == labels[b]) continue;
    }
    if (a == b) continue;
    if (!seen.insert(pair_key(a, b, n)).second) continue;
    edges.push_back({std::min(a, b), std::max(a, b), 1.0});
  }

  // Bag-of-words attributes: per-class topic blocks plus a shared pool; a
  // noise fraction of nodes writes from a wrong class's topics.
  const int topic_block = static_cast<int>(cfg.attr_dim * 0.55) / K;
  const int shared_base = topic_block * K;
  const int shared_size = cfg.attr_dim - shared_base;
  std::vector<SparseRow> attrs(n);
  std::unordered_set<int> words;
  for (int i = 0; i < n; ++i) {
    int c = labels[i];
    if (rng.uniform01() < cfg.attr_noise_frac) {
      const int shift = 1 + static_cast<int>(rng.uniform_below(K - 1));
      c = (c + shift) % K;
    }
    const int count = cfg.min_words +
                      static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(cfg.max_words - cfg.min_words + 1)));
    words.clear();
    int guard = 0;
    while (static_cast<int>(words.size()) < count && ++guard < 50 * count) {
      int w;
      if (rng.uniform01() < cfg.topic_word_frac) {
        w = c * topic_block + skewed_pick(rng, topic_block);
      } else {
        w = shared_base + skewed_pick(rng, shared_size);
      }
      words.insert(w);
    }
    attrs[i].nz.reserve(words.size());
    std::vector<int> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end());
    for (int w : sorted) attrs[i].nz.emplace_back(w, rng.uniform(0.4, 1.6));
  }

  SyntheticDataset out;
  out.graph = AttributedGraph(n, std::move(edges), /*directed=*/false,
                              std::move(attrs), cfg.attr_dim, {});
  out.labels = std::move(labels);
  for (int c = 0; c < K; ++c) out.class_names.push_back("class" + std::to_string(c));
  return out;
}

CitationConfig citation_preset(std::string_view name) {
  CitationConfig cfg;
  if (name == "cora_ml") {
    cfg.num_nodes = 2995;
    cfg.num_edges = 8416;
    cfg.attr_dim = 2879;
    cfg.num_classes = 7;
    cfg.seed = 101;
  } else if (name == "citeseer") {
    cfg.num_nodes = 4230;
    cfg.num_edges = 5358;
    cfg.attr_dim = 2701;
    cfg.num_classes = 6;
    cfg.seed = 102;
  } else if (name == "demo") {
    cfg.num_nodes = 300;
    cfg.num_edges = 900;
    cfg.attr_dim = 500;
    cfg.num_classes = 4;
    cfg.seed = 103;
  } else {
    throw ValidationError("unknown dataset preset '" + std::string(name) + "'");
  }
  return cfg;
}

SyntheticDataset make_sbm(int num_nodes, int num_blocks, double p_in,
                          double p_out, std::uint64_t seed) {
  if (num_nodes < 2 || num_blocks < 1)
    throw ValidationError("sbm needs >= 2 nodes and >= 1 block");
  Rng rng(derive_seed(seed, "sbm"));
  std::vector<int> labels(num_nodes);
  for (int i = 0; i < num_nodes; ++i) labels[i] = i % num_blocks;

  std::vector<Edge> edges;
  for (int i = 0; i < num_nodes; ++i) {
    for (int j = i + 1; j < num_nodes; ++j) {
      const double p = labels[i] == labels[j] ? p_in : p_out;
      if (rng.uniform01() < p) edges.push_back({i, j, 1.0});
    }
  }

  // Identity attributes: x_i = e_i, so the encoder acts as an embedding table.
  std::vector<SparseRow> attrs(num_nodes);
  for (int i = 0; i < num_nodes; ++i) attrs[i].nz.emplace_back(i, 1.0);

  SyntheticDataset out;
  out.graph = AttributedGraph(num_nodes, std::move(edges), /*directed=*/false,
                              std::move(attrs), num_nodes, {});
  out.labels = std::move(labels);
  for (int c = 0; c < num_blocks; ++c)
    out.class_names.push_back("block" + std::to_string(c));
  return out;
}

std::vector<std::filesystem::path> write_dataset(
    const SyntheticDataset& data, const std::filesystem::path& dir,
    const std::string& stem) {
  std::filesystem::create_directories(dir);
  const auto edges = dir / (stem + ".edges");
  const auto attrs = dir / (stem + ".attrs");
  const auto labels = dir / (stem + ".labels");
  write_edge_file(edges, data.graph);
  write_attr_file(attrs, data.graph);
  write_label_file(labels, data.graph, data.labels, data.class_names);
  return {edges, attrs, labels};
}

}  // namespace glace
