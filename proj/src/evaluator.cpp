#include "glace/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "glace/errors.hpp"
#include "glace/gauss.hpp"
#include "glace/logistic.hpp"
#include "glace/rng.hpp"

namespace glace {

namespace {

std::string fmt_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "task=" << task << '\n';
  if (auc >= 0.0) out << "auc=" << fmt_metric(auc) << '\n';
  if (ap >= 0.0) out << "ap=" << fmt_metric(ap) << '\n';
  if (f1_micro >= 0.0) out << "f1_micro=" << fmt_metric(f1_micro) << '\n';
  if (f1_macro >= 0.0) out << "f1_macro=" << fmt_metric(f1_macro) << '\n';
  out << "seed=" << seed << '\n';
  for (const auto& [k, v] : config) out << k << '=' << v << '\n';
  return out.str();
}

void EvalReport::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write report: " + path.string());
  out << to_text();
}

NodeEmbeddings embed_all(const ModelParams& model,
                         const std::vector<SparseRow>& rows) {
  NodeEmbeddings emb;
  emb.kind = model.kind;
  emb.symmetric = model.symmetric;
  if (model.kind == ModelKind::Glace) {
    emb.gauss.resize(rows.size());
    EncodeCache cache;
    for (std::size_t v = 0; v < rows.size(); ++v)
      encode_into(model.main, rows[v], model.hidden_relu, emb.gauss[v], cache);
  } else {
    emb.points.resize(rows.size());
    for (std::size_t v = 0; v < rows.size(); ++v)
      emb.points[v] = encode_point(model.main, rows[v], model.hidden_relu);
  }
  return emb;
}

double score_pair(const NodeEmbeddings& emb, int i, int j) {
  if (emb.kind == ModelKind::Glace)
    return -dissimilarity(emb.gauss[i], emb.gauss[j], emb.symmetric);
  const auto& ui = emb.points[i];
  const auto& uj = emb.points[j];
  double dot = 0.0;
  for (std::size_t l = 0; l < ui.size(); ++l) dot += ui[l] * uj[l];
  return dot;
}

double score_pair(const ModelParams& model, const SparseRow& xi,
                  const SparseRow& xj) {
  if (model.kind == ModelKind::Glace) {
    const auto zi = encode(model.main, xi, model.hidden_relu);
    const auto zj = encode(model.main, xj, model.hidden_relu);
    return -dissimilarity(zi, zj, model.symmetric);
  }
  const auto ui = encode_point(model.main, xi, model.hidden_relu);
  const auto uj = encode_point(model.main, xj, model.hidden_relu);
  double dot = 0.0;
  for (std::size_t l = 0; l < ui.size(); ++l) dot += ui[l] * uj[l];
  return dot;
}

std::vector<double> score_pairs(std::span<const ModelParams* const> models,
                                const std::vector<SparseRow>& rows,
                                std::span<const std::pair<int, int>> pairs,
                                bool normalize) {
  if (models.empty()) throw ValidationError("no models to score with");
  std::vector<double> total(pairs.size(), 0.0);
  for (const ModelParams* model : models) {
    const NodeEmbeddings emb = embed_all(*model, rows);
    std::vector<double> s(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k)
      s[k] = score_pair(emb, pairs[k].first, pairs[k].second);
    if (normalize && models.size() > 1 && !s.empty()) {
      const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
      const double lo = *mn, hi = *mx;
      for (double& v : s) v = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) total[k] += s[k];
  }
  return total;
}

std::pair<double, double> link_prediction(std::span<const double> pos_scores,
                                          std::span<const double> neg_scores) {
  if (pos_scores.empty() || neg_scores.empty())
    throw ValidationError("link prediction needs nonempty positive and negative sets");
  const std::size_t P = pos_scores.size(), N = neg_scores.size();

  struct Item {
    double score;
    bool pos;
    std::size_t idx;
  };
  std::vector<Item> items;
  items.reserve(P + N);
  for (std::size_t k = 0; k < P; ++k) items.push_back({pos_scores[k], true, k});
  for (std::size_t k = 0; k < N; ++k) items.push_back({neg_scores[k], false, k});

  // AUC via the rank-sum statistic; tied scores get their average rank, which
  // counts each tied positive-negative comparison as one half.
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].score < items[b].score;
  });
  double rank_sum_pos = 0.0;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() &&
           items[order[hi + 1]].score == items[order[lo]].score)
      ++hi;
    const double avg_rank = 0.5 * (static_cast<double>(lo + 1) + static_cast<double>(hi + 1));
    for (std::size_t k = lo; k <= hi; ++k)
      if (items[order[k]].pos) rank_sum_pos += avg_rank;
    lo = hi + 1;
  }
  const double U = rank_sum_pos - 0.5 * static_cast<double>(P) * (P + 1);
  const double auc = U / (static_cast<double>(P) * static_cast<double>(N));

  // AP as the running-precision sum over the descending ranking. Tied scores
  // rank negatives first, then earlier list positions: deterministic and
  // pessimistic for positives.
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pos != b.pos) return !a.pos;
    return a.idx < b.idx;
  });
  double ap = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].pos) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  ap /= static_cast<double>(P);
  return {auc, ap};
}

std::pair<double, double> evaluate_link_prediction(
    std::span<const ModelParams* const> models,
    const std::vector<SparseRow>& rows,
    std::span<const std::pair<int, int>> pos,
    std::span<const std::pair<int, int>> neg, bool normalize) {
  // Score both lists jointly so concat normalization sees the whole pair set.
  std::vector<std::pair<int, int>> all(pos.begin(), pos.end());
  all.insert(all.end(), neg.begin(), neg.end());
  const auto scores = score_pairs(models, rows, all, normalize);
  const std::vector<double> pos_s(scores.begin(), scores.begin() + pos.size());
  const std::vector<double> neg_s(scores.begin() + pos.size(), scores.end());
  return link_prediction(pos_s, neg_s);
}

namespace {

std::pair<double, double> f1_scores(const std::vector<int>& truth,
                                    const std::vector<int>& pred) {
  // micro-F1 for single-label multiclass reduces to accuracy.
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (truth[i] == pred[i]) ++correct;
  const double micro = static_cast<double>(correct) / truth.size();

  std::vector<int> classes;
  classes.insert(classes.end(), truth.begin(), truth.end());
  classes.insert(classes.end(), pred.begin(), pred.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  double macro = 0.0;
  for (int c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (pred[i] == c && truth[i] == c) ++tp;
      if (pred[i] == c && truth[i] != c) ++fp;
      if (pred[i] != c && truth[i] == c) ++fn;
    }
    const double denom = 2.0 * tp + fp + fn;
    macro += denom > 0.0 ? 2.0 * tp / denom : 0.0;
  }
  macro /= static_cast<double>(classes.size());
  return {micro, macro};
}

}  // namespace

std::pair<double, double> node_classification(
    const std::vector<SparseRow>& features, const std::vector<int>& labels,
    int num_classes, const ClassificationConfig& config) {
  if (features.size() != labels.size())
    throw ValidationError("feature/label count mismatch");
  if (!(config.train_frac > 0.0 && config.train_frac < 1.0))
    throw ValidationError("train_frac must be in (0, 1)");
  if (config.trials < 1) throw ValidationError("trials must be >= 1");

  std::vector<int> labeled;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) labeled.push_back(static_cast<int>(i));
  if (labeled.size() < 2)
    throw ValidationError("need at least two labeled nodes");

  int dim = 1;
  for (const auto& row : features)
    for (const auto& [col, val] : row.nz) dim = std::max(dim, col + 1);

  std::vector<int> present(num_classes, 0);
  for (int i : labeled) present[labels[i]] = 1;
  if (std::accumulate(present.begin(), present.end(), 0) < 2)
    throw ValidationError("need at least two classes among labeled nodes");

  double micro_sum = 0.0, macro_sum = 0.0;
  for (int trial = 0; trial < config.trials; ++trial) {
    std::vector<int> order;
    std::size_t n_train = 0;
    bool ok = false;
    for (int attempt = 0; attempt < config.max_resamples && !ok; ++attempt) {
      Rng rng(derive_seed(config.seed, "eval-trial:" + std::to_string(trial) +
                                           ":" + std::to_string(attempt)));
      order = labeled;
      for (std::size_t k = order.size(); k > 1; --k)
        std::swap(order[k - 1], order[rng.uniform_below(k)]);
      n_train = static_cast<std::size_t>(
          std::llround(config.train_frac * static_cast<double>(order.size())));
      n_train = std::clamp<std::size_t>(n_train, 1, order.size() - 1);
      // Every class with labeled support must appear in the train portion.
      std::vector<int> seen(num_classes, 0);
      for (std::size_t k = 0; k < n_train; ++k) seen[labels[order[k]]] = 1;
      ok = true;
      for (int c = 0; c < num_classes; ++c)
        if (present[c] && !seen[c]) ok = false;
    }
    if (!ok)
      throw ValidationError(
          "a class kept missing the training portion after bounded resampling");

    std::vector<SparseRow> Xtr;
    std::vector<int> ytr;
    for (std::size_t k = 0; k < n_train; ++k) {
      Xtr.push_back(features[order[k]]);
      ytr.push_back(labels[order[k]]);
    }
    const LogisticModel clf = fit_logistic(Xtr, ytr, num_classes, dim);

    std::vector<int> truth, pred;
    for (std::size_t k = n_train; k < order.size(); ++k) {
      truth.push_back(labels[order[k]]);
      pred.push_back(clf.predict(features[order[k]]));
    }
    const auto [micro, macro] = f1_scores(truth, pred);
    micro_sum += micro;
    macro_sum += macro;
  }
  return {micro_sum / config.trials, macro_sum / config.trials};
}

std::pair<double, double> node_classification(
    const std::vector<std::vector<double>>& features,
    const std::vector<int>& labels, int num_classes,
    const ClassificationConfig& config) {
  return node_classification(to_sparse_rows(features), labels, num_classes,
                             config);
}

std::vector<std::vector<double>> embedding_features(
    const ModelParams& model, const std::vector<SparseRow>& rows,
    bool with_log_sigma) {
  std::vector<std::vector<double>> out(rows.size());
  if (model.kind == ModelKind::Lace) {
    for (std::size_t v = 0; v < rows.size(); ++v)
      out[v] = encode_point(model.main, rows[v], model.hidden_relu);
    return out;
  }
  EncodeCache cache;
  GaussianEmbedding z;
  for (std::size_t v = 0; v < rows.size(); ++v) {
    encode_into(model.main, rows[v], model.hidden_relu, z, cache);
    out[v] = z.mu;
    if (with_log_sigma) {
      for (double s : z.sigma) out[v].push_back(std::log(s));
    }
  }
  return out;
}

std::pair<double, double> inductive_link_prediction(const ModelParams& model,
                                                    const InductiveSplit& ind) {
  const int n = static_cast<int>(ind.original_to_visible.size());
  std::vector<SparseRow> rows(n);
  std::size_t h = 0;
  for (int v = 0; v < n; ++v) {
    const int vis = ind.original_to_visible[v];
    if (vis >= 0) {
      rows[v] = ind.visible_graph.attributes(vis);
    } else {
      if (h >= ind.hidden_nodes.size() || ind.hidden_nodes[h] != v)
        throw ValidationError("inductive split index maps are inconsistent");
      rows[v] = ind.hidden_attr[h++];
    }
  }
  std::vector<std::pair<int, int>> pos;
  pos.reserve(ind.eval_pos.size());
  for (const Edge& e : ind.eval_pos) pos.emplace_back(e.src, e.dst);
  const ModelParams* m = &model;
  return evaluate_link_prediction({&m, 1}, rows, pos, ind.eval_neg);
}

void export_embeddings(const ModelParams& model, const AttributedGraph& g,
                       const std::filesystem::path& path, bool include_sigma) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write embeddings: " + path.string());
  const int L = model.embed_dim();
  const bool with_sigma = include_sigma && model.kind == ModelKind::Glace;

  out << "node_id";
  for (int l = 1; l <= L; ++l) out << "\tmu_" << l;
  if (with_sigma)
    for (int l = 1; l <= L; ++l) out << "\tsigma_" << l;
  out << '\n';

  char buf[32];
  EncodeCache cache;
  GaussianEmbedding z;
  for (int v = 0; v < g.num_nodes(); ++v) {
    out << g.node_id(v);
    if (model.kind == ModelKind::Glace) {
      encode_into(model.main, g.attributes(v), model.hidden_relu, z, cache);
      for (double m : z.mu) {
        std::snprintf(buf, sizeof buf, "%.17g", m);
        out << '\t' << buf;
      }
      if (with_sigma) {
        for (double s : z.sigma) {
          std::snprintf(buf, sizeof buf, "%.17g", s);
          out << '\t' << buf;
        }
      }
    } else {
      for (double m : encode_point(model.main, g.attributes(v), model.hidden_relu)) {
        std::snprintf(buf, sizeof buf, "%.17g", m);
        out << '\t' << buf;
      }
    }
    out << '\n';
  }
}

std::pair<std::vector<std::string>, NodeEmbeddings> read_embedding_tsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open embeddings: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty embedding file", 1);

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, '\t')) header.push_back(tok);
  }
  int L = 0, S = 0;
  for (const auto& h : header) {
    if (h.rfind("mu_", 0) == 0) ++L;
    if (h.rfind("sigma_", 0) == 0) ++S;
  }
  if (header.empty() || header[0] != "node_id" || L == 0 || (S != 0 && S != L))
    throw ParseError("malformed embedding header", 1);

  NodeEmbeddings emb;
  emb.kind = S > 0 ? ModelKind::Glace : ModelKind::Lace;
  std::vector<std::string> ids;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cells;
    while (std::getline(ss, tok, '\t')) cells.push_back(tok);
    if (static_cast<int>(cells.size()) != 1 + L + S)
      throw ParseError("embedding row has wrong column count", lineno);
    ids.push_back(cells[0]);
    if (S > 0) {
      GaussianEmbedding z;
      for (int l = 0; l < L; ++l) z.mu.push_back(std::stod(cells[1 + l]));
      for (int l = 0; l < L; ++l)
        z.sigma.push_back(std::stod(cells[1 + L + l]));
      emb.gauss.push_back(std::move(z));
    } else {
      std::vector<double> u;
      for (int l = 0; l < L; ++l) u.push_back(std::stod(cells[1 + l]));
      emb.points.push_back(std::move(u));
    }
  }
  return {std::move(ids), std::move(emb)};
}

}  // namespace glace
