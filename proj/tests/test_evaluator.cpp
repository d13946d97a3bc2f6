#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "glace/errors.hpp"
#include "glace/evaluator.hpp"
#include "glace/rng.hpp"
#include "glace/synth.hpp"
#include "glace/trainer.hpp"
#include "support/tmpdir.hpp"

using namespace glace;

TEST_SUITE_BEGIN("evaluator");

namespace {

// O(P*N) pairwise AUC; ties count one half.
double auc_brute(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos)
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return wins / (pos.size() * neg.size());
}

// Independent AP walk with the same deterministic tie rule (negatives first,
// then original list position).
double ap_brute(const std::vector<double>& pos, const std::vector<double>& neg) {
  struct Row {
    double s;
    bool is_pos;
    std::size_t idx;
  };
  std::vector<Row> rows;
  for (std::size_t k = 0; k < pos.size(); ++k) rows.push_back({pos[k], true, k});
  for (std::size_t k = 0; k < neg.size(); ++k) rows.push_back({neg[k], false, k});
  // selection sort: clearly independent of std::sort details
  for (std::size_t a = 0; a < rows.size(); ++a) {
    std::size_t best = a;
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const Row &rb = rows[b], &rbest = rows[best];
      const bool better = rb.s > rbest.s ||
                          (rb.s == rbest.s && !rb.is_pos && rbest.is_pos) ||
                          (rb.s == rbest.s && rb.is_pos == rbest.is_pos &&
                           rb.idx < rbest.idx);
      if (better) best = b;
    }
    std::swap(rows[a], rows[best]);
  }
  double ap = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].is_pos) {
      ++hits;
      ap += static_cast<double>(hits) / (k + 1);
    }
  }
  return ap / pos.size();
}

ModelParams fresh_model(const AttributedGraph& g, ModelKind kind,
                        std::uint64_t seed, int L = 8, int hidden = 16) {
  ModelParams m;
  m.mode = ProximityMode::First;
  m.kind = kind;
  m.symmetric = true;
  m.seed = seed;
  m.main = init_params(g.attr_dim(), hidden, L, seed);
  return m;
}

}  // namespace

TEST_CASE("link_prediction: canonical examples") {
  const std::vector<double> perfect_pos{3.0, 2.5}, perfect_neg{1.0, 0.5};
  auto [auc, ap] = link_prediction(perfect_pos, perfect_neg);
  CHECK(auc == 1.0);
  CHECK(ap == 1.0);

  const std::vector<double> flat_pos{1.0, 1.0, 1.0}, flat_neg{1.0, 1.0};
  CHECK(link_prediction(flat_pos, flat_neg).first == doctest::Approx(0.5));

  const std::vector<double> pos{0.9, 0.4}, neg{0.6, 0.1};
  CHECK(link_prediction(pos, neg).first == doctest::Approx(0.75));
}

TEST_CASE("link_prediction equals the brute-force oracle on random configs") {
  Rng rng(42);
  const double alphabet[] = {0.1, 0.25, 0.5, 0.75, 0.9};
  for (int rep = 0; rep < 400; ++rep) {
    const int npos = 1 + static_cast<int>(rng.uniform_below(6));
    const int nneg = 1 + static_cast<int>(rng.uniform_below(6));
    std::vector<double> pos(npos), neg(nneg);
    for (double& s : pos) s = alphabet[rng.uniform_below(5)];
    for (double& s : neg) s = alphabet[rng.uniform_below(5)];
    const auto [auc, ap] = link_prediction(pos, neg);
    CHECK(auc == doctest::Approx(auc_brute(pos, neg)).epsilon(1e-12));
    CHECK(ap == doctest::Approx(ap_brute(pos, neg)).epsilon(1e-12));
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  Rng rng(7);
  std::vector<double> pos(30), neg(40);
  for (double& s : pos) s = rng.uniform(-2.0, 2.0);
  for (double& s : neg) s = rng.uniform(-2.5, 1.5);
  const double base = link_prediction(pos, neg).first;

  auto apply = [&](auto f) {
    auto p = pos;
    auto n = neg;
    for (double& s : p) s = f(s);
    for (double& s : n) s = f(s);
    return link_prediction(p, n).first;
  };
  CHECK(apply([](double s) { return std::exp(s); }) == doctest::Approx(base).epsilon(1e-12));
  CHECK(apply([](double s) { return 3.0 * s + 11.0; }) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("auc exchange antisymmetry in the tie-free case") {
  Rng rng(8);
  std::vector<double> a(25), b(35);
  for (double& s : a) s = rng.uniform01();
  for (double& s : b) s = rng.uniform01();
  const double ab = link_prediction(a, b).first;
  const double ba = link_prediction(b, a).first;
  CHECK(ab + ba == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("link_prediction rejects empty inputs") {
  const std::vector<double> some{1.0};
  CHECK_THROWS_AS(link_prediction({}, some), ValidationError);
  CHECK_THROWS_AS(link_prediction(some, {}), ValidationError);
}

TEST_CASE("score_pair: coincident gaussians score 0, the maximum") {
  const auto data = make_sbm(10, 2, 0.5, 0.1, 3);
  const auto model = fresh_model(data.graph, ModelKind::Glace, 5);
  const auto emb = embed_all(model, data.graph.attribute_rows());
  CHECK(score_pair(model, data.graph.attributes(2), data.graph.attributes(2)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  for (int j = 0; j < 10; ++j) CHECK(score_pair(emb, 0, j) <= 1e-12);
}

TEST_CASE("score_pair: lace is the inner product") {
  std::vector<SparseRow> attrs(2);
  attrs[0].nz = {{0, 1.0}};
  attrs[1].nz = {{1, 1.0}};
  NodeEmbeddings emb;
  emb.kind = ModelKind::Lace;
  emb.points = {{1.0, 0.0}, {0.0, 1.0}};
  CHECK(score_pair(emb, 0, 1) == 0.0);
  emb.points = {{1.0, 2.0}, {3.0, -1.0}};
  CHECK(score_pair(emb, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("concat of a model with itself ranks like the single model") {
  const auto data = make_sbm(16, 2, 0.6, 0.1, 9);
  const auto model = fresh_model(data.graph, ModelKind::Glace, 21);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 16; ++i)
    for (int j = i + 1; j < 16; ++j) pairs.emplace_back(i, j);

  const ModelParams* one[] = {&model};
  const ModelParams* two[] = {&model, &model};
  const auto s1 = score_pairs({one, 1}, data.graph.attribute_rows(), pairs);
  const auto s2 = score_pairs({two, 2}, data.graph.attribute_rows(), pairs);

  std::vector<std::size_t> o1(pairs.size()), o2(pairs.size());
  std::iota(o1.begin(), o1.end(), 0);
  o2 = o1;
  std::sort(o1.begin(), o1.end(), [&](auto a, auto b) { return s1[a] < s1[b]; });
  std::sort(o2.begin(), o2.end(), [&](auto a, auto b) { return s2[a] < s2[b]; });
  CHECK(o1 == o2);
}

TEST_CASE("classification: separable clouds give micro-f1 1.0") {
  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  Rng rng(12);
  for (int i = 0; i < 60; ++i) {
    const int c = i % 2;
    feats.push_back({(c ? 4.0 : -4.0) + rng.uniform(-0.5, 0.5),
                     rng.uniform(-0.5, 0.5)});
    labels.push_back(c);
  }
  ClassificationConfig cfg;
  cfg.train_frac = 0.5;
  cfg.trials = 5;
  cfg.seed = 3;
  const auto [micro, macro] = node_classification(feats, labels, 2, cfg);
  CHECK(micro == doctest::Approx(1.0));
  CHECK(macro == doctest::Approx(1.0));
}

TEST_CASE("classification: permuted labels sit at chance level") {
  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  Rng rng(13);
  for (int i = 0; i < 400; ++i) {
    feats.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0)});
    labels.push_back(static_cast<int>(rng.uniform_below(2)));  // 2 balanced classes
  }
  ClassificationConfig cfg;
  cfg.train_frac = 0.5;
  cfg.trials = 10;
  cfg.seed = 4;
  const auto [micro, macro] = node_classification(feats, labels, 2, cfg);
  CHECK(micro == doctest::Approx(0.5).epsilon(0.1));  // 0.5 +/- 0.05
  CHECK(std::fabs(micro - 0.5) < 0.05);
}

TEST_CASE("classification: more labels never hurt on separable data") {
  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  Rng rng(14);
  for (int i = 0; i < 200; ++i) {
    const int c = i % 3;
    feats.push_back({3.0 * c + rng.uniform(-0.8, 0.8), rng.uniform(-1.0, 1.0)});
    labels.push_back(c);
  }
  ClassificationConfig lo, hi;
  lo.train_frac = 0.1;
  hi.train_frac = 0.9;
  lo.trials = hi.trials = 10;
  lo.seed = hi.seed = 5;
  const double f_lo = node_classification(feats, labels, 3, lo).first;
  const double f_hi = node_classification(feats, labels, 3, hi).first;
  CHECK(f_hi >= f_lo);
}

TEST_CASE("classification: config validation and unlabeled rows") {
  std::vector<std::vector<double>> feats{{0.0}, {1.0}, {2.0}, {3.0}};
  std::vector<int> labels{0, 1, -1, 1};  // one unlabeled row is skipped
  ClassificationConfig cfg;
  cfg.train_frac = 0.5;
  cfg.trials = 2;
  const auto [micro, macro] = node_classification(feats, labels, 2, cfg);
  CHECK(micro >= 0.0);
  cfg.train_frac = 0.0;
  CHECK_THROWS_AS(node_classification(feats, labels, 2, cfg), ValidationError);
}

TEST_CASE("inductive: zero hidden nodes reduces to ordinary link prediction") {
  const auto data = make_sbm(20, 2, 0.6, 0.05, 17);
  const auto& g = data.graph;
  const auto split = split_edges(g, 0.25, 0.0, 17);
  const auto model = fresh_model(g, ModelKind::Glace, 33);

  InductiveSplit ind;
  ind.visible_graph = g;
  ind.eval_pos = split.test_pos;
  ind.eval_neg = split.test_neg;
  ind.visible_to_original.resize(g.num_nodes());
  std::iota(ind.visible_to_original.begin(), ind.visible_to_original.end(), 0);
  ind.original_to_visible = ind.visible_to_original;

  const auto [ia, ip] = inductive_link_prediction(model, ind);
  std::vector<std::pair<int, int>> pos;
  for (const Edge& e : split.test_pos) pos.emplace_back(e.src, e.dst);
  const ModelParams* mp = &model;
  const auto [ta, tp] = evaluate_link_prediction({&mp, 1}, g.attribute_rows(),
                                                 pos, split.test_neg);
  CHECK(ia == doctest::Approx(ta).epsilon(1e-12));
  CHECK(ip == doctest::Approx(tp).epsilon(1e-12));
}

TEST_CASE("inductive: an untrained model scores at chance on identity attrs") {
  const auto data = make_sbm(80, 2, 0.4, 0.05, 19);
  const auto ind = hide_nodes(data.graph, 0.2, 19);
  const auto model = fresh_model(data.graph, ModelKind::Glace, 12345);
  const auto [auc, ap] = inductive_link_prediction(model, ind);
  CHECK(std::fabs(auc - 0.5) < 0.05);
}

TEST_CASE("export: shape, ids, and score round-trip") {
  TmpDir dir("export");
  const auto data = make_sbm(3, 1, 0.9, 0.0, 23);
  const auto& g = data.graph;
  ModelParams model = fresh_model(g, ModelKind::Glace, 77, /*L=*/2, /*hidden=*/4);

  const auto path = dir / "emb.tsv";
  export_embeddings(model, g, path);

  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);  // header + 3 data rows
  CHECK(std::count(lines[0].begin(), lines[0].end(), '\t') == 4);  // 5 columns
  CHECK(lines[0] == "node_id\tmu_1\tmu_2\tsigma_1\tsigma_2");

  const auto [ids, emb] = read_embedding_tsv(path);
  CHECK(ids == std::vector<std::string>{"0", "1", "2"});
  NodeEmbeddings reread = emb;
  reread.symmetric = model.symmetric;
  const auto live = embed_all(model, g.attribute_rows());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::fabs(score_pair(reread, i, j) - score_pair(live, i, j)) < 1e-9);

  // lace export has no sigma columns
  ModelParams lace = fresh_model(g, ModelKind::Lace, 78, 2, 4);
  export_embeddings(lace, g, dir / "lace.tsv");
  std::ifstream in2(dir / "lace.tsv");
  std::getline(in2, line);
  CHECK(line == "node_id\tmu_1\tmu_2");
}

TEST_CASE("embedding_features: mu and optional log-sigma") {
  const auto data = make_sbm(6, 2, 0.5, 0.1, 29);
  const auto model = fresh_model(data.graph, ModelKind::Glace, 9, 4, 8);
  const auto plain = embedding_features(model, data.graph.attribute_rows(), false);
  const auto with = embedding_features(model, data.graph.attribute_rows(), true);
  CHECK(plain[0].size() == 4);
  CHECK(with[0].size() == 8);
  const auto z = encode(model.main, data.graph.attributes(0));
  CHECK(with[0][4] == doctest::Approx(std::log(z.sigma[0])).epsilon(1e-12));
}

TEST_CASE("eval report text is stable and ordered") {
  EvalReport r;
  r.task = "link_prediction";
  r.auc = 0.912345678;
  r.ap = 0.891;
  r.seed = 9;
  r.config["alpha"] = "x";
  r.config["beta"] = "y";
  const std::string text = r.to_text();
  CHECK(text.find("task=link_prediction\n") != std::string::npos);
  CHECK(text.find("auc=0.912346\n") != std::string::npos);
  CHECK(text.find("alpha=x\nbeta=y\n") != std::string::npos);
  CHECK(text.find("f1_micro") == std::string::npos);  // unset metrics omitted
}

TEST_SUITE_END();
