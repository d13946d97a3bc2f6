#include "glace/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "glace/evaluator.hpp"
#include "glace/gauss.hpp"
#include "glace/rng.hpp"
#include "glace/sampler.hpp"

namespace glace {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// softplus(x) = log(1 + e^x) without overflow; -log sigmoid(x) = softplus(-x).
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

struct Scratch {
  GaussianEmbedding z_src, z_oth;
  std::vector<double> u_src, u_oth;  // LACE point embeddings
  EncodeCache c_src, c_oth;
  DissimilarityGrad dg;
  std::vector<double> gmu_src, gsig_src, gmu_oth, gsig_oth;
};

// Forward/backward for a range of edge groups. Gradients are accumulated
// into `grads`; returns the summed loss of the range.
double process_range(const ModelParams& params, const AttributedGraph& g,
                     std::span<const EdgeSample> groups, bool use_context,
                     ModelGrads& grads, Scratch& s) {
  const EncoderParams& enc_src = params.main;
  const EncoderParams& enc_oth = use_context ? *params.context : params.main;
  EncoderGrads& g_src = grads.main;
  EncoderGrads& g_oth = use_context ? *grads.context : grads.main;
  const bool relu = params.hidden_relu;
  const int L = params.main.embed_dim;
  const bool gauss = params.kind == ModelKind::Glace;

  double loss = 0.0;
  for (const EdgeSample& grp : groups) {
    double group_loss = 0.0;
    try {
      s.gmu_src.assign(L, 0.0);
      s.gsig_src.assign(L, 0.0);

      if (gauss) {
        encode_into(enc_src, g.attributes(grp.src), relu, s.z_src, s.c_src);
      } else {
        s.u_src = encode_point(enc_src, g.attributes(grp.src), relu, &s.c_src);
      }

      auto one_term = [&](int other, bool positive) {
        double d;
        if (gauss) {
          encode_into(enc_oth, g.attributes(other), relu, s.z_oth, s.c_oth);
          d = dissimilarity(s.z_src, s.z_oth, params.symmetric);
        } else {
          s.u_oth = encode_point(enc_oth, g.attributes(other), relu, &s.c_oth);
          double dot = 0.0;
          for (int l = 0; l < L; ++l) dot += s.u_src[l] * s.u_oth[l];
          d = -dot;
        }
        // positive: loss -= log s(-d); negative: loss -= log s(d).
        group_loss += positive ? softplus(d) : softplus(-d);
        const double coef =
            positive ? stable_sigmoid(d) : -stable_sigmoid(-d);

        if (gauss) {
          dissimilarity_grad_into(s.z_src, s.z_oth, params.symmetric, s.dg);
          for (int l = 0; l < L; ++l) {
            s.gmu_src[l] += coef * s.dg.mu_i[l];
            s.gsig_src[l] += coef * s.dg.sigma_i[l];
          }
          s.gmu_oth.resize(L);
          s.gsig_oth.resize(L);
          for (int l = 0; l < L; ++l) {
            s.gmu_oth[l] = coef * s.dg.mu_j[l];
            s.gsig_oth[l] = coef * s.dg.sigma_j[l];
          }
          encode_backward(enc_oth, g.attributes(other), s.c_oth, s.gmu_oth,
                          s.gsig_oth, relu, g_oth);
        } else {
          // d = -(u_src . u_oth)
          for (int l = 0; l < L; ++l) s.gmu_src[l] += coef * -s.u_oth[l];
          s.gmu_oth.resize(L);
          for (int l = 0; l < L; ++l) s.gmu_oth[l] = coef * -s.u_src[l];
          encode_backward(enc_oth, g.attributes(other), s.c_oth, s.gmu_oth,
                          {}, relu, g_oth);
        }
      };

      one_term(grp.dst, /*positive=*/true);
      for (int v : grp.negatives) one_term(v, /*positive=*/false);

      encode_backward(enc_src, g.attributes(grp.src), s.c_src, s.gmu_src,
                      gauss ? std::span<const double>(s.gsig_src)
                            : std::span<const double>(),
                      relu, g_src);
    } catch (const ValidationError& e) {
      throw NumericalError("edge " + g.node_id(grp.src) + " -> " +
                           g.node_id(grp.dst) + ": " + e.what());
    }
    if (!std::isfinite(group_loss))
      throw NumericalError("non-finite loss for edge " + g.node_id(grp.src) +
                           " -> " + g.node_id(grp.dst));
    loss += group_loss;
  }
  return loss;
}

void check_loss_inputs(const ModelParams& params, const AttributedGraph& g,
                       std::span<const EdgeSample> batch) {
  for (const EdgeSample& e : batch) {
    if (e.src < 0 || e.src >= g.num_nodes() || e.dst < 0 ||
        e.dst >= g.num_nodes())
      throw ValidationError("batch edge endpoint outside graph");
    for (int v : e.negatives)
      if (v < 0 || v >= g.num_nodes())
        throw ValidationError("negative sample outside graph");
  }
  (void)params;
}

}  // namespace

void ModelGrads::resize_like(const ModelParams& m) {
  main.resize_like(m.main);
  if (m.context) {
    context.emplace();
    context->resize_like(*m.context);
  } else {
    context.reset();
  }
}

void ModelGrads::zero() {
  main.zero();
  if (context) context->zero();
}

double batch_loss_first(const ModelParams& params, const AttributedGraph& g,
                        std::span<const EdgeSample> batch, ModelGrads& grads) {
  check_loss_inputs(params, g, batch);
  if (grads.main.W.size() != params.main.W.size()) grads.resize_like(params);
  Scratch s;
  return process_range(params, g, batch, /*use_context=*/false, grads, s);
}

double batch_loss_second(const ModelParams& params, const AttributedGraph& g,
                         std::span<const EdgeSample> batch, ModelGrads& grads) {
  if (!params.context)
    throw ValidationError("second-order loss requires a context encoder");
  check_loss_inputs(params, g, batch);
  if (grads.main.W.size() != params.main.W.size()) grads.resize_like(params);
  if (!grads.context) grads.resize_like(params);
  Scratch s;
  return process_range(params, g, batch, /*use_context=*/true, grads, s);
}

AdamState AdamState::init(const ModelParams& params) {
  auto count = [](const EncoderParams& e) {
    return e.W.size() + e.b.size() + e.W_mu.size() + e.b_mu.size() +
           e.W_sigma.size() + e.b_sigma.size();
  };
  AdamState st;
  st.m_main.assign(count(params.main), 0.0);
  st.v_main.assign(count(params.main), 0.0);
  if (params.context) {
    st.m_ctx.assign(count(*params.context), 0.0);
    st.v_ctx.assign(count(*params.context), 0.0);
  }
  return st;
}

namespace {

void adam_tensor(std::vector<double>& theta, const std::vector<double>& g,
                 double* m, double* v, double lr, double bc1, double bc2) {
  const std::size_t n = theta.size();
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * g[i];
    v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
    theta[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kAdamEps);
  }
}

void adam_encoder(EncoderParams& e, const EncoderGrads& g, double* m,
                  double* v, double lr, double bc1, double bc2) {
  std::size_t off = 0;
  auto upd = [&](std::vector<double>& theta, const std::vector<double>& grad) {
    adam_tensor(theta, grad, m + off, v + off, lr, bc1, bc2);
    off += theta.size();
  };
  upd(e.W, g.W);
  upd(e.b, g.b);
  upd(e.W_mu, g.W_mu);
  upd(e.b_mu, g.b_mu);
  upd(e.W_sigma, g.W_sigma);
  upd(e.b_sigma, g.b_sigma);
}

}  // namespace

void adam_step(AdamState& state, ModelParams& params, const ModelGrads& grads,
               double lr) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  adam_encoder(params.main, grads.main, state.m_main.data(),
               state.v_main.data(), lr, bc1, bc2);
  if (params.context) {
    if (!grads.context)
      throw ValidationError("adam_step: missing context gradients");
    adam_encoder(*params.context, *grads.context, state.m_ctx.data(),
                 state.v_ctx.data(), lr, bc1, bc2);
  }
}

namespace {

// Validation link-prediction AUC, encoding only the nodes the pairs touch.
double validation_auc(const ModelParams& model, const AttributedGraph& g,
                      const std::vector<Edge>& val_pos,
                      const std::vector<std::pair<int, int>>& val_neg) {
  std::unordered_map<int, int> slot;
  auto touch = [&](int v) { slot.emplace(v, static_cast<int>(slot.size())); };
  for (const Edge& e : val_pos) {
    touch(e.src);
    touch(e.dst);
  }
  for (const auto& [i, j] : val_neg) {
    touch(i);
    touch(j);
  }

  const bool gauss = model.kind == ModelKind::Glace;
  std::vector<GaussianEmbedding> zs(gauss ? slot.size() : 0);
  std::vector<std::vector<double>> us(gauss ? 0 : slot.size());
  for (const auto& [node, s] : slot) {
    if (gauss)
      zs[s] = encode(model.main, g.attributes(node), model.hidden_relu);
    else
      us[s] = encode_point(model.main, g.attributes(node), model.hidden_relu);
  }

  auto score = [&](int i, int j) {
    const int si = slot.at(i), sj = slot.at(j);
    if (gauss) return -dissimilarity(zs[si], zs[sj], model.symmetric);
    double dot = 0.0;
    for (std::size_t l = 0; l < us[si].size(); ++l) dot += us[si][l] * us[sj][l];
    return dot;
  };

  std::vector<double> pos, neg;
  pos.reserve(val_pos.size());
  neg.reserve(val_neg.size());
  for (const Edge& e : val_pos) pos.push_back(score(e.src, e.dst));
  for (const auto& [i, j] : val_neg) neg.push_back(score(i, j));
  return link_prediction(pos, neg).first;
}

}  // namespace

namespace {

std::pair<ModelParams, TrainReport> train_impl(const AttributedGraph& g,
                                               const EdgeSplit& split,
                                               const TrainConfig& config,
                                               const ModelParams* start) {
  if (config.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (config.batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (config.negatives < 1) throw ValidationError("negatives must be >= 1");
  if (config.patience < 1) throw ValidationError("patience must be >= 1");
  if (config.val_check_every < 1)
    throw ValidationError("val_check_every must be >= 1");
  if (!(config.learning_rate > 0.0))
    throw ValidationError("learning rate must be positive");
  if (config.workers < 1) throw ValidationError("workers must be >= 1");
  if (split.train_edges.empty())
    throw ValidationError("training split has no edges");

  const AttributedGraph tg = subgraph_with_edges(g, split.train_edges);
  const std::vector<Edge> arcs = tg.arcs();
  std::vector<double> arc_w(arcs.size());
  for (std::size_t k = 0; k < arcs.size(); ++k) arc_w[k] = arcs[k].weight;
  const AliasTable edge_table = AliasTable::build(arc_w);
  const AliasTable noise_table = noise_distribution(tg);

  ModelParams model;
  if (start) {
    if (start->mode != config.mode || start->kind != config.kind)
      throw ValidationError("resume checkpoint disagrees with mode/kind");
    if (start->main.input_dim != tg.attr_dim() ||
        start->main.hidden_dim != config.hidden_dim ||
        start->main.embed_dim != config.embed_dim)
      throw ValidationError("resume checkpoint disagrees with dimensions");
    model = *start;
    model.symmetric = config.symmetric_kl;
    model.hidden_relu = config.hidden_relu;
  } else {
    model.mode = config.mode;
    model.kind = config.kind;
    model.symmetric = config.symmetric_kl;
    model.hidden_relu = config.hidden_relu;
    model.seed = config.seed;
    model.main = init_params(tg.attr_dim(), config.hidden_dim, config.embed_dim,
                             derive_seed(config.seed, "init-main"));
    if (config.mode == ProximityMode::Second)
      model.context = init_params(tg.attr_dim(), config.hidden_dim,
                                  config.embed_dim,
                                  derive_seed(config.seed, "init-context"));
  }

  AdamState opt = AdamState::init(model);
  const bool has_val = !split.val_pos.empty() && !split.val_neg.empty();
  const bool second = config.mode == ProximityMode::Second;
  const int workers =
      std::min<int>(config.workers, std::max<int>(1, config.batch_size));

  std::vector<ModelGrads> wgrads(workers);
  for (auto& wg : wgrads) wg.resize_like(model);
  std::vector<Scratch> scratch(workers);

  std::vector<EdgeSample> batch(config.batch_size);
  for (auto& e : batch) e.negatives.resize(config.negatives);

  TrainReport report;
  double best_auc = -1.0;
  int checks_without_improvement = 0;
  std::optional<ModelParams> best_model;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    // Samples are drawn up front on one thread so the batch content does not
    // depend on the worker count.
    Rng rng(derive_seed(config.seed, "batch:" + std::to_string(iter)));
    for (int e = 0; e < config.batch_size; ++e) {
      const Edge& arc = arcs[edge_table.draw(rng)];
      batch[e].src = arc.src;
      batch[e].dst = arc.dst;
      for (int n = 0; n < config.negatives; ++n) {
        int v = -1;
        for (int tries = 0; tries < 1000; ++tries) {
          v = noise_table.draw(rng);
          if (v != arc.src) break;
          v = -1;
        }
        if (v < 0)
          throw ValidationError(
              "noise distribution is degenerate around node " +
              tg.node_id(arc.src));
        batch[e].negatives[n] = v;
      }
    }

    double loss = 0.0;
    try {
      if (workers == 1) {
        wgrads[0].zero();
        loss = process_range(model, tg, batch, second, wgrads[0], scratch[0]);
      } else {
        const int chunk =
            (config.batch_size + workers - 1) / workers;
        std::vector<double> losses(workers, 0.0);
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              wgrads[w].zero();
              const int lo = w * chunk;
              const int hi = std::min<int>(lo + chunk, config.batch_size);
              if (lo < hi)
                losses[w] = process_range(
                    model, tg,
                    std::span<const EdgeSample>(batch.data() + lo, hi - lo),
                    second, wgrads[w], scratch[w]);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
          if (err) std::rethrow_exception(err);
        // Ordered reduction: deterministic for a fixed worker count.
        for (int w = 1; w < workers; ++w) {
          wgrads[0].main.add(wgrads[w].main);
          if (wgrads[0].context) wgrads[0].context->add(*wgrads[w].context);
        }
        for (double l : losses) loss += l;
      }
    } catch (const NumericalError& e) {
      throw NumericalError("iteration " + std::to_string(iter) + ": " +
                           e.what());
    }
    if (!std::isfinite(loss))
      throw NumericalError("non-finite loss at iteration " +
                           std::to_string(iter));

    adam_step(opt, model, wgrads[0], config.learning_rate);
    report.iterations_run = iter;

    if (has_val && iter % config.val_check_every == 0) {
      const double auc = validation_auc(model, g, split.val_pos, split.val_neg);
      report.val_auc_history.emplace_back(iter, auc);
      if (config.log) {
        *config.log << iter << '\t' << auc << '\t' << elapsed() << '\n';
        config.log->flush();
      }
      if (auc > best_auc) {
        best_auc = auc;
        report.best_iteration = iter;
        best_model = model;
        checks_without_improvement = 0;
      } else if (++checks_without_improvement >= config.patience) {
        break;
      }
    }
  }

  if (best_model)
    model = std::move(*best_model);
  else
    report.best_iteration = report.iterations_run;
  report.wall_clock_sec = elapsed();
  return {std::move(model), report};
}

}  // namespace

std::pair<ModelParams, TrainReport> train(const AttributedGraph& g,
                                          const EdgeSplit& split,
                                          const TrainConfig& config) {
  return train_impl(g, split, config, nullptr);
}

std::pair<ModelParams, TrainReport> train_from(const AttributedGraph& g,
                                               const EdgeSplit& split,
                                               const TrainConfig& config,
                                               const ModelParams& start) {
  return train_impl(g, split, config, &start);
}

}  // namespace glace
