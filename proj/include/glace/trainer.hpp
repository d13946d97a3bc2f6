#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "glace/encoder.hpp"
#include "glace/graph.hpp"

namespace glace {

struct TrainConfig {
  ProximityMode mode = ProximityMode::First;
  ModelKind kind = ModelKind::Glace;
  int embed_dim = 64;    // L
  int hidden_dim = 512;  // m
  int negatives = 5;     // N per edge
  int batch_size = 512;  // b
  double learning_rate = 1e-3;
  int max_iters = 2000;  // T
  int patience = 10;     // consecutive non-improving validation checks
  int val_check_every = 25;
  std::uint64_t seed = 1;
  bool symmetric_kl = true;
  bool hidden_relu = false;
  int workers = 1;
  std::ostream* log = nullptr;  // one line per validation check: iter\tval_auc\telapsed_sec
};

struct TrainReport {
  int iterations_run = 0;
  std::vector<std::pair<int, double>> val_auc_history;
  int best_iteration = 0;
  double wall_clock_sec = 0.0;
};

/// One positive arc with its negative nodes.
struct EdgeSample {
  int src = 0;
  int dst = 0;
  std::vector<int> negatives;
};

struct ModelGrads {
  EncoderGrads main;
  std::optional<EncoderGrads> context;

  void resize_like(const ModelParams& m);
  void zero();
};

/// Negative-sampled first-order objective over a batch,
///   loss = -sum_(i,j) [ log s(-d(z_i,z_j)) + sum_n log s(d(z_i,z_vn)) ]
/// with s the logistic function and both endpoints through the main encoder.
/// log s is evaluated in softplus form, so large |d| cannot overflow.
/// Returns the batch loss and accumulates gradients into `grads`.
double batch_loss_first(const ModelParams& params, const AttributedGraph& g,
                        std::span<const EdgeSample> batch, ModelGrads& grads);

/// Second-order variant: destinations and negatives go through the context
/// encoder; gradients flow to both encoders.
double batch_loss_second(const ModelParams& params, const AttributedGraph& g,
                         std::span<const EdgeSample> batch, ModelGrads& grads);

/// Adam state for one model (bias-corrected, beta1=0.9, beta2=0.999, eps=1e-8).
struct AdamState {
  std::vector<double> m_main, v_main;
  std::vector<double> m_ctx, v_ctx;
  long step = 0;

  static AdamState init(const ModelParams& params);
};

void adam_step(AdamState& state, ModelParams& params, const ModelGrads& grads,
               double lr);

/// Mini-batch training with alias-based edge sampling, degree^(3/4) negative
/// sampling, and early stopping on validation link-prediction AUC; returns
/// the parameters of the best validation check.
std::pair<ModelParams, TrainReport> train(const AttributedGraph& g,
                                          const EdgeSplit& split,
                                          const TrainConfig& config);

/// Continue from existing parameters (the optimizer state restarts). The
/// checkpoint's mode/kind/dimensions must agree with the config.
std::pair<ModelParams, TrainReport> train_from(const AttributedGraph& g,
                                               const EdgeSplit& split,
                                               const TrainConfig& config,
                                               const ModelParams& start);

}  // namespace glace
