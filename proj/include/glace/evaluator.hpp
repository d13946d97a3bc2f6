#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glace/encoder.hpp"
#include "glace/graph.hpp"

namespace glace {

struct EvalReport {
  std::string task;
  double auc = -1.0;
  double ap = -1.0;
  double f1_micro = -1.0;
  double f1_macro = -1.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;  // snapshot of the run settings

  std::string to_text() const;  // flat key=value lines
  void write(const std::filesystem::path& path) const;
};

/// Materialized per-node embeddings for one scoring pass. Gaussian for GLACE,
/// point vectors for LACE.
struct NodeEmbeddings {
  ModelKind kind = ModelKind::Glace;
  bool symmetric = true;
  std::vector<GaussianEmbedding> gauss;
  std::vector<std::vector<double>> points;

  std::size_t size() const {
    return kind == ModelKind::Glace ? gauss.size() : points.size();
  }
};

/// Encode every row through the main encoder.
NodeEmbeddings embed_all(const ModelParams& model,
                         const std::vector<SparseRow>& rows);

/// Pair score; higher means more likely an edge. GLACE ranks by negative
/// dissimilarity, LACE by inner product.
double score_pair(const NodeEmbeddings& emb, int i, int j);
double score_pair(const ModelParams& model, const SparseRow& xi,
                  const SparseRow& xj);

/// Scores for a pair list. With several models (concatenated first+second
/// setting) each model's scores are min-max normalized over the pair set
/// before summing, since KL-derived scores from two models share no scale;
/// pass normalize=false for the raw sum.
std::vector<double> score_pairs(std::span<const ModelParams* const> models,
                                const std::vector<SparseRow>& rows,
                                std::span<const std::pair<int, int>> pairs,
                                bool normalize = true);

/// Exact ranking metrics from positive/negative scores. AUC is the
/// probability that a random positive outranks a random negative (ties count
/// one half), computed via rank statistics. AP is the running-precision sum
/// over the list ranked by descending score; ties rank negatives first, then
/// earlier list positions.
std::pair<double, double> link_prediction(std::span<const double> pos_scores,
                                          std::span<const double> neg_scores);

/// Convenience wrapper: embed, score pos/neg pair lists, return (AUC, AP).
std::pair<double, double> evaluate_link_prediction(
    std::span<const ModelParams* const> models,
    const std::vector<SparseRow>& rows,
    std::span<const std::pair<int, int>> pos,
    std::span<const std::pair<int, int>> neg, bool normalize = true);

struct ClassificationConfig {
  double train_frac = 0.5;
  int trials = 10;
  std::uint64_t seed = 0;
  int max_resamples = 20;  // retries when a class misses the train portion
};

/// Train/test the in-repo logistic classifier on given features; F1 averaged
/// over `trials` with derived sub-seeds. Rows with label -1 are ignored.
std::pair<double, double> node_classification(
    const std::vector<std::vector<double>>& features,
    const std::vector<int>& labels, int num_classes,
    const ClassificationConfig& config);
std::pair<double, double> node_classification(
    const std::vector<SparseRow>& features, const std::vector<int>& labels,
    int num_classes, const ClassificationConfig& config);

/// Classification feature vectors: mu, optionally concatenated with
/// log(sigma) for the uncertainty ablation. Ignored for LACE.
std::vector<std::vector<double>> embedding_features(
    const ModelParams& model, const std::vector<SparseRow>& rows,
    bool with_log_sigma = false);

/// Link prediction where hidden-node embeddings come from encoding attribute
/// rows never seen in training.
std::pair<double, double> inductive_link_prediction(const ModelParams& model,
                                                    const InductiveSplit& ind);

/// TSV export: node_id, mu_1..mu_L and (GLACE only) sigma_1..sigma_L, using
/// original id tokens.
void export_embeddings(const ModelParams& model, const AttributedGraph& g,
                       const std::filesystem::path& path,
                       bool include_sigma = true);

/// Parse an exported TSV back into embeddings (round-trip checks, plotting).
std::pair<std::vector<std::string>, NodeEmbeddings> read_embedding_tsv(
    const std::filesystem::path& path);

}  // namespace glace
