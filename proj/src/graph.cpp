#include "glace/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "glace/rng.hpp"

namespace glace {

namespace {

// Strips a trailing '#' comment and surrounding whitespace.
std::string clean_line(const std::string& raw) {
  std::string s = raw;
  if (const auto pos = s.find('#'); pos != std::string::npos) s.resize(pos);
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(std::move(tok));
  return out;
}

double parse_real(const std::string& tok, long line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw ParseError("malformed number '" + tok + "'", line);
  return v;
}

long long parse_int(const std::string& tok, long line) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw ParseError("malformed integer '" + tok + "'", line);
  return v;
}

// Canonical nonnegative decimal below `bound`: no sign, no leading zeros.
bool is_canonical_index(const std::string& tok, long long bound, long long* out) {
  if (tok.empty() || tok.size() > 18) return false;
  if (tok.size() > 1 && tok[0] == '0') return false;
  long long v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  if (v >= bound) return false;
  *out = v;
  return true;
}

std::int64_t pair_key(int i, int j, int n) {
  return static_cast<std::int64_t>(i) * n + j;
}

struct RawEdge {
  std::string src, dst;
  double weight;
  long line;
};

}  // namespace

AttributedGraph::AttributedGraph(int num_nodes, std::vector<Edge> edges,
                                 bool directed,
                                 std::vector<SparseRow> attributes,
                                 int attr_dim,
                                 std::vector<std::string> node_ids)
    : num_nodes_(num_nodes),
      attr_dim_(attr_dim),
      directed_(directed),
      edges_(std::move(edges)),
      attrs_(std::move(attributes)),
      ids_(std::move(node_ids)) {
  if (num_nodes_ < 0 || attr_dim_ < 0)
    throw ValidationError("negative node count or attribute dimension");
  if (static_cast<int>(attrs_.size()) != num_nodes_)
    throw ValidationError("attribute row count (" + std::to_string(attrs_.size()) +
                          ") does not match node count (" +
                          std::to_string(num_nodes_) + ")");
  if (ids_.empty()) {
    ids_.reserve(num_nodes_);
    for (int v = 0; v < num_nodes_; ++v) ids_.push_back(std::to_string(v));
  }
  if (static_cast<int>(ids_.size()) != num_nodes_)
    throw ValidationError("node id map size does not match node count");
  id_index_.reserve(ids_.size());
  for (int v = 0; v < num_nodes_; ++v) {
    if (!id_index_.emplace(ids_[v], v).second)
      throw ValidationError("duplicate node id '" + ids_[v] + "'");
  }

  for (auto& row : attrs_) {
    std::sort(row.nz.begin(), row.nz.end());
    for (std::size_t k = 0; k < row.nz.size(); ++k) {
      const auto& [col, val] = row.nz[k];
      if (col < 0 || col >= attr_dim_)
        throw ValidationError("attribute column " + std::to_string(col) +
                              " outside [0, " + std::to_string(attr_dim_) + ")");
      if (!(val >= 0.0) || !std::isfinite(val))
        throw ValidationError("attribute values must be finite and nonnegative");
      if (k > 0 && row.nz[k - 1].first == col)
        throw ValidationError("duplicate attribute entry for column " +
                              std::to_string(col));
    }
  }

  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= num_nodes_ || e.dst < 0 || e.dst >= num_nodes_)
      throw ValidationError("edge endpoint outside [0, num_nodes)");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge weight must be a positive finite real");
  }

  // CSR over arcs; undirected edges contribute both orientations.
  std::vector<Edge> arcs;
  arcs.reserve(directed_ ? edges_.size() : 2 * edges_.size());
  for (const Edge& e : edges_) {
    arcs.push_back(e);
    if (!directed_) arcs.push_back({e.dst, e.src, e.weight});
  }
  std::sort(arcs.begin(), arcs.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t k = 1; k < arcs.size(); ++k) {
    if (arcs[k].src == arcs[k - 1].src && arcs[k].dst == arcs[k - 1].dst)
      throw ValidationError("duplicate edge " + ids_[arcs[k].src] + " -> " +
                            ids_[arcs[k].dst]);
  }

  row_ptr_.assign(num_nodes_ + 1, 0);
  arc_dst_.resize(arcs.size());
  arc_wgt_.resize(arcs.size());
  out_degree_.assign(num_nodes_, 0.0);
  for (const Edge& a : arcs) ++row_ptr_[a.src + 1];
  for (int v = 0; v < num_nodes_; ++v) row_ptr_[v + 1] += row_ptr_[v];
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    arc_dst_[k] = arcs[k].dst;
    arc_wgt_[k] = arcs[k].weight;
    out_degree_[arcs[k].src] += arcs[k].weight;
  }
}

std::span<const int> AttributedGraph::neighbors(int v) const {
  return {arc_dst_.data() + row_ptr_[v],
          static_cast<std::size_t>(row_ptr_[v + 1] - row_ptr_[v])};
}

std::span<const double> AttributedGraph::neighbor_weights(int v) const {
  return {arc_wgt_.data() + row_ptr_[v],
          static_cast<std::size_t>(row_ptr_[v + 1] - row_ptr_[v])};
}

bool AttributedGraph::has_arc(int src, int dst) const {
  const auto begin = arc_dst_.begin() + row_ptr_[src];
  const auto end = arc_dst_.begin() + row_ptr_[src + 1];
  return std::binary_search(begin, end, dst);
}

std::vector<Edge> AttributedGraph::arcs() const {
  std::vector<Edge> out;
  out.reserve(arc_dst_.size());
  for (int v = 0; v < num_nodes_; ++v)
    for (std::int64_t k = row_ptr_[v]; k < row_ptr_[v + 1]; ++k)
      out.push_back({v, arc_dst_[k], arc_wgt_[k]});
  return out;
}

int AttributedGraph::index_of(const std::string& id) const {
  const auto it = id_index_.find(id);
  return it == id_index_.end() ? -1 : it->second;
}

AttributedGraph load_graph(const std::filesystem::path& edge_path,
                           const std::filesystem::path& attr_path,
                           bool directed) {
  std::ifstream ef(edge_path);
  if (!ef) throw ValidationError("cannot open edge file: " + edge_path.string());

  std::vector<RawEdge> raw;
  {
    std::string line;
    long lineno = 0;
    while (std::getline(ef, line)) {
      ++lineno;
      const std::string s = clean_line(line);
      if (s.empty()) continue;
      const auto toks = split_ws(s);
      if (toks.size() != 2 && toks.size() != 3)
        throw ParseError("expected 'src dst [weight]', got " +
                             std::to_string(toks.size()) + " fields",
                         lineno);
      const double w = toks.size() == 3 ? parse_real(toks[2], lineno) : 1.0;
      if (!(w > 0.0) || !std::isfinite(w))
        throw ValidationError("edge weight must be > 0 at line " +
                              std::to_string(lineno) + " of " +
                              edge_path.string());
      raw.push_back({toks[0], toks[1], w, lineno});
    }
  }

  std::ifstream af(attr_path);
  if (!af) throw ValidationError("cannot open attribute file: " + attr_path.string());

  std::string line;
  long lineno = 0;
  auto next_content_line = [&]() -> std::string {
    while (std::getline(af, line)) {
      ++lineno;
      const std::string s = clean_line(line);
      if (!s.empty()) return s;
    }
    return {};
  };

  const std::string header = next_content_line();
  if (header.empty()) throw ParseError("attribute file missing 'num_nodes D' header", lineno);
  const auto htoks = split_ws(header);
  if (htoks.size() != 2)
    throw ParseError("attribute header must be 'num_nodes D'", lineno);
  const long long num_nodes_ll = parse_int(htoks[0], lineno);
  const long long attr_dim_ll = parse_int(htoks[1], lineno);
  if (num_nodes_ll < 0 || attr_dim_ll < 1)
    throw ValidationError("attribute header declares invalid sizes");
  const int num_nodes = static_cast<int>(num_nodes_ll);
  const int attr_dim = static_cast<int>(attr_dim_ll);

  // Id resolution. When every token is a canonical integer in
  // [0, num_nodes) the dense index is the integer itself; otherwise ids are
  // densified by first appearance (edge file order, then attribute triplets).
  bool identity_ids = true;
  for (const RawEdge& e : raw) {
    long long v;
    if (!is_canonical_index(e.src, num_nodes, &v) ||
        !is_canonical_index(e.dst, num_nodes, &v)) {
      identity_ids = false;
      break;
    }
  }

  std::unordered_map<std::string, int> index;
  std::vector<std::string> ids;
  auto resolve = [&](const std::string& tok, bool allow_new, long at_line) -> int {
    if (identity_ids) {
      long long v;
      if (!is_canonical_index(tok, num_nodes, &v))
        throw ValidationError("node id '" + tok + "' outside [0, " +
                              std::to_string(num_nodes) + ") at line " +
                              std::to_string(at_line));
      return static_cast<int>(v);
    }
    if (const auto it = index.find(tok); it != index.end()) return it->second;
    if (!allow_new)
      throw ValidationError("unknown node id '" + tok + "' at line " +
                            std::to_string(at_line));
    const int idx = static_cast<int>(ids.size());
    if (idx >= num_nodes)
      throw ValidationError("more distinct node ids than the declared " +
                            std::to_string(num_nodes) + " nodes");
    index.emplace(tok, idx);
    ids.push_back(tok);
    return idx;
  };

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw)
    edges.push_back({resolve(e.src, true, e.line), resolve(e.dst, true, e.line), e.weight});

  std::vector<SparseRow> attrs(num_nodes);
  const std::string first = next_content_line();
  if (first == "dense") {
    if (!identity_ids)
      throw ValidationError(
          "dense attribute rows require integer node ids 0..num_nodes-1");
    for (int r = 0; r < num_nodes; ++r) {
      const std::string row_line = next_content_line();
      if (row_line.empty())
        throw ParseError("dense attribute block ended after " +
                             std::to_string(r) + " of " +
                             std::to_string(num_nodes) + " rows",
                         lineno);
      std::vector<std::string> cells;
      std::stringstream ss(row_line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (static_cast<int>(cells.size()) != attr_dim)
        throw ParseError("dense row has " + std::to_string(cells.size()) +
                             " values, expected " + std::to_string(attr_dim),
                         lineno);
      for (int c = 0; c < attr_dim; ++c) {
        const double v = parse_real(clean_line(cells[c]), lineno);
        if (v != 0.0) attrs[r].nz.emplace_back(c, v);
      }
    }
  } else if (!first.empty()) {
    std::string cur = first;
    while (true) {
      const auto toks = split_ws(cur);
      if (toks.size() != 3)
        throw ParseError("expected 'row col value' triplet", lineno);
      const int r = resolve(toks[0], true, lineno);
      const long long c = parse_int(toks[1], lineno);
      if (c < 0 || c >= attr_dim)
        throw ValidationError("attribute column " + std::to_string(c) +
                              " outside [0, " + std::to_string(attr_dim) +
                              ") at line " + std::to_string(lineno));
      attrs[r].nz.emplace_back(static_cast<int>(c), parse_real(toks[2], lineno));
      cur = next_content_line();
      if (cur.empty()) break;
    }
  }

  if (!identity_ids && static_cast<int>(ids.size()) != num_nodes)
    throw ValidationError("attribute file declares " + std::to_string(num_nodes) +
                          " nodes but only " + std::to_string(ids.size()) +
                          " distinct ids appear");

  return AttributedGraph(num_nodes, std::move(edges), directed,
                         std::move(attrs), attr_dim,
                         identity_ids ? std::vector<std::string>{} : std::move(ids));
}

namespace {

// Uniform non-edge pairs by rejection. `extra_ok(i, j)` can impose additional
// membership constraints (e.g. at least one hidden endpoint).
template <typename Pred>
std::vector<std::pair<int, int>> sample_negatives(const AttributedGraph& g,
                                                  std::size_t count, Rng& rng,
                                                  Pred extra_ok) {
  const int n = g.num_nodes();
  std::vector<std::pair<int, int>> out;
  out.reserve(count);
  std::unordered_set<std::int64_t> seen;
  seen.reserve(count * 2);
  const std::size_t max_attempts = 100 * std::max<std::size_t>(count, 1);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > max_attempts)
      throw ValidationError(
          "could not sample enough non-edges (graph too dense); got " +
          std::to_string(out.size()) + " of " + std::to_string(count));
    int i = static_cast<int>(rng.uniform_below(n));
    int j = static_cast<int>(rng.uniform_below(n));
    if (i == j) continue;
    if (!extra_ok(i, j)) continue;
    if (g.has_arc(i, j)) continue;
    if (!g.directed() && g.has_arc(j, i)) continue;
    // Canonical orientation for undirected dedup.
    const int a = g.directed() ? i : std::min(i, j);
    const int b = g.directed() ? j : std::max(i, j);
    if (!seen.insert(pair_key(a, b, n)).second) continue;
    out.emplace_back(i, j);
  }
  return out;
}

}  // namespace

EdgeSplit split_edges(const AttributedGraph& g, double test_frac,
                      double val_frac, std::uint64_t seed) {
  if (g.num_edges() < 1) throw ValidationError("cannot split a graph with no edges");
  if (!(test_frac > 0.0 && test_frac < 1.0))
    throw ValidationError("test_frac must be in (0, 1)");
  if (!(val_frac >= 0.0 && val_frac < 1.0))
    throw ValidationError("val_frac must be in [0, 1)");
  if (!(test_frac + val_frac < 1.0))
    throw ValidationError("test_frac + val_frac must be < 1");

  const std::size_t m = g.edges().size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_frac * m));
  const auto n_val = static_cast<std::size_t>(std::llround(val_frac * m));

  Rng rng(derive_seed(seed, "split"));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = m; k > 1; --k)
    std::swap(order[k - 1], order[rng.uniform_below(k)]);

  EdgeSplit split;
  split.seed = seed;
  split.test_frac = test_frac;
  split.val_frac = val_frac;
  for (std::size_t k = 0; k < m; ++k) {
    const Edge& e = g.edges()[order[k]];
    if (k < n_test)
      split.test_pos.push_back(e);
    else if (k < n_test + n_val)
      split.val_pos.push_back(e);
    else
      split.train_edges.push_back(e);
  }

  auto negs = sample_negatives(g, n_test + n_val, rng,
                               [](int, int) { return true; });
  split.test_neg.assign(negs.begin(), negs.begin() + n_test);
  split.val_neg.assign(negs.begin() + n_test, negs.end());
  return split;
}

InductiveSplit hide_nodes(const AttributedGraph& g, double frac,
                          std::uint64_t seed) {
  if (g.num_nodes() < 1) throw ValidationError("cannot hide nodes of an empty graph");
  if (!(frac > 0.0 && frac < 1.0))
    throw ValidationError("hide fraction must be in (0, 1)");

  const int n = g.num_nodes();
  const auto n_hidden =
      static_cast<int>(std::llround(frac * static_cast<double>(n)));

  Rng rng(derive_seed(seed, "hide"));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < n_hidden; ++k) {
    const auto pick = k + static_cast<int>(rng.uniform_below(n - k));
    std::swap(order[k], order[pick]);
  }

  InductiveSplit ind;
  ind.seed = seed;
  ind.frac = frac;
  ind.hidden_nodes.assign(order.begin(), order.begin() + n_hidden);
  std::sort(ind.hidden_nodes.begin(), ind.hidden_nodes.end());

  std::vector<char> hidden(n, 0);
  for (int v : ind.hidden_nodes) hidden[v] = 1;

  std::vector<Edge> visible_edges;
  for (const Edge& e : g.edges()) {
    if (hidden[e.src] || hidden[e.dst])
      ind.eval_pos.push_back(e);
    else
      visible_edges.push_back(e);
  }
  if (visible_edges.empty())
    throw ValidationError("hiding " + std::to_string(n_hidden) +
                          " nodes leaves no visible edges");

  ind.eval_neg = sample_negatives(
      g, ind.eval_pos.size(), rng,
      [&](int i, int j) { return hidden[i] || hidden[j]; });

  // Re-index the visible portion, keeping the order of original ids.
  ind.original_to_visible.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!hidden[v]) {
      ind.original_to_visible[v] = static_cast<int>(ind.visible_to_original.size());
      ind.visible_to_original.push_back(v);
    }
  }
  const int nv = static_cast<int>(ind.visible_to_original.size());
  std::vector<SparseRow> vis_attrs(nv);
  std::vector<std::string> vis_ids(nv);
  for (int v = 0; v < nv; ++v) {
    vis_attrs[v] = g.attributes(ind.visible_to_original[v]);
    vis_ids[v] = g.node_id(ind.visible_to_original[v]);
  }
  for (Edge& e : visible_edges) {
    e.src = ind.original_to_visible[e.src];
    e.dst = ind.original_to_visible[e.dst];
  }
  ind.visible_graph =
      AttributedGraph(nv, std::move(visible_edges), g.directed(),
                      std::move(vis_attrs), g.attr_dim(), std::move(vis_ids));

  ind.hidden_attr.reserve(ind.hidden_nodes.size());
  for (int v : ind.hidden_nodes) ind.hidden_attr.push_back(g.attributes(v));
  return ind;
}

AttributedGraph subgraph_with_edges(const AttributedGraph& g,
                                    std::vector<Edge> edges) {
  return AttributedGraph(g.num_nodes(), std::move(edges), g.directed(),
                         g.attribute_rows(), g.attr_dim(), g.node_ids());
}

namespace {

void write_edge_lines(std::ofstream& out, const AttributedGraph& g,
                      const std::vector<Edge>& edges) {
  for (const Edge& e : edges) {
    out << g.node_id(e.src) << ' ' << g.node_id(e.dst);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << ' ' << buf << '\n';
  }
}

void write_pair_lines(std::ofstream& out, const AttributedGraph& g,
                      const std::vector<std::pair<int, int>>& pairs) {
  for (const auto& [i, j] : pairs)
    out << g.node_id(i) << ' ' << g.node_id(j) << '\n';
}

}  // namespace

void write_split_manifest(const std::filesystem::path& path,
                          const AttributedGraph& g, const EdgeSplit& split) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write split manifest: " + path.string());
  out << "glace-split v1\n";
  out << "seed " << split.seed << '\n';
  out << "test_frac " << split.test_frac << '\n';
  out << "val_frac " << split.val_frac << '\n';
  out << "section train " << split.train_edges.size() << '\n';
  write_edge_lines(out, g, split.train_edges);
  out << "section val_pos " << split.val_pos.size() << '\n';
  write_edge_lines(out, g, split.val_pos);
  out << "section val_neg " << split.val_neg.size() << '\n';
  write_pair_lines(out, g, split.val_neg);
  out << "section test_pos " << split.test_pos.size() << '\n';
  write_edge_lines(out, g, split.test_pos);
  out << "section test_neg " << split.test_neg.size() << '\n';
  write_pair_lines(out, g, split.test_neg);
}

EdgeSplit read_split_manifest(const std::filesystem::path& path,
                              const AttributedGraph& g) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open split manifest: " + path.string());
  std::string line;
  long lineno = 0;
  auto next = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      const std::string s = clean_line(line);
      if (!s.empty()) return s;
    }
    return {};
  };

  if (next() != "glace-split v1")
    throw ParseError("not a glace split manifest: " + path.string(), lineno);

  EdgeSplit split;
  auto resolve = [&](const std::string& tok) {
    const int v = g.index_of(tok);
    if (v < 0)
      throw ValidationError("split manifest names unknown node '" + tok +
                            "' at line " + std::to_string(lineno));
    return v;
  };

  std::string cur = next();
  while (!cur.empty()) {
    auto toks = split_ws(cur);
    if (toks[0] == "seed" && toks.size() == 2) {
      split.seed = static_cast<std::uint64_t>(parse_int(toks[1], lineno));
      cur = next();
    } else if (toks[0] == "test_frac" && toks.size() == 2) {
      split.test_frac = parse_real(toks[1], lineno);
      cur = next();
    } else if (toks[0] == "val_frac" && toks.size() == 2) {
      split.val_frac = parse_real(toks[1], lineno);
      cur = next();
    } else if (toks[0] == "section" && toks.size() == 3) {
      const std::string name = toks[1];
      const long long count = parse_int(toks[2], lineno);
      for (long long k = 0; k < count; ++k) {
        cur = next();
        if (cur.empty())
          throw ParseError("split manifest section '" + name + "' truncated", lineno);
        auto t = split_ws(cur);
        if (name == "val_neg" || name == "test_neg") {
          if (t.size() != 2) throw ParseError("expected 'src dst'", lineno);
          auto& dstv = name == "val_neg" ? split.val_neg : split.test_neg;
          dstv.emplace_back(resolve(t[0]), resolve(t[1]));
        } else {
          if (t.size() != 3) throw ParseError("expected 'src dst weight'", lineno);
          Edge e{resolve(t[0]), resolve(t[1]), parse_real(t[2], lineno)};
          if (name == "train")
            split.train_edges.push_back(e);
          else if (name == "val_pos")
            split.val_pos.push_back(e);
          else if (name == "test_pos")
            split.test_pos.push_back(e);
          else
            throw ParseError("unknown section '" + name + "'", lineno);
        }
      }
      cur = next();
    } else {
      throw ParseError("unexpected split manifest line '" + cur + "'", lineno);
    }
  }
  return split;
}

std::pair<std::vector<int>, std::vector<std::string>> load_labels(
    const std::filesystem::path& path, const AttributedGraph& g) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open label file: " + path.string());
  std::vector<std::pair<int, std::string>> entries;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = clean_line(line);
    if (s.empty()) continue;
    const auto toks = split_ws(s);
    if (toks.size() != 2)
      throw ParseError("expected 'node_id label'", lineno);
    const int v = g.index_of(toks[0]);
    if (v < 0)
      throw ValidationError("label file names unknown node '" + toks[0] +
                            "' at line " + std::to_string(lineno));
    entries.emplace_back(v, toks[1]);
  }

  std::vector<std::string> names;
  for (const auto& [v, name] : entries) names.push_back(name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  std::vector<int> labels(g.num_nodes(), -1);
  for (const auto& [v, name] : entries) {
    const auto it = std::lower_bound(names.begin(), names.end(), name);
    labels[v] = static_cast<int>(it - names.begin());
  }
  return {std::move(labels), std::move(names)};
}

void write_edge_file(const std::filesystem::path& path,
                     const AttributedGraph& g) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write edge file: " + path.string());
  write_edge_lines(out, g, g.edges());
}

void write_attr_file(const std::filesystem::path& path,
                     const AttributedGraph& g) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write attribute file: " + path.string());
  out << g.num_nodes() << ' ' << g.attr_dim() << '\n';
  char buf[32];
  for (int v = 0; v < g.num_nodes(); ++v) {
    for (const auto& [col, val] : g.attributes(v).nz) {
      std::snprintf(buf, sizeof buf, "%.17g", val);
      out << g.node_id(v) << ' ' << col << ' ' << buf << '\n';
    }
  }
}

void write_label_file(const std::filesystem::path& path,
                      const AttributedGraph& g, const std::vector<int>& labels,
                      const std::vector<std::string>& class_names) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write label file: " + path.string());
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (labels[v] < 0) continue;
    out << g.node_id(v) << ' ' << class_names[labels[v]] << '\n';
  }
}

void write_id_map(const std::filesystem::path& path, const AttributedGraph& g) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write id map: " + path.string());
  out << "node_id\tindex\n";
  for (int v = 0; v < g.num_nodes(); ++v)
    out << g.node_id(v) << '\t' << v << '\n';
}

}  // namespace glace
