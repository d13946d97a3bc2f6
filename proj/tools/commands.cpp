#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "glace/digest.hpp"
#include "glace/errors.hpp"
#include "glace/evaluator.hpp"
#include "glace/rng.hpp"
#include "glace/run_manifest.hpp"
#include "glace/synth.hpp"
#include "glace/trainer.hpp"

namespace glace::cli {

namespace {

namespace fs = std::filesystem;

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

AttributedGraph load_inputs(const InputOpts& in) {
  return load_graph(in.edges, in.attrs, in.directed);
}

bool resolve_symmetric(const std::string& kl, bool directed) {
  if (kl == "symmetric") return true;
  if (kl == "asymmetric") return false;
  if (kl == "auto") return !directed;
  throw ValidationError("--kl must be auto, symmetric or asymmetric");
}

TrainConfig to_train_config(const TrainOpts& o) {
  TrainConfig cfg;
  if (o.mode == "first")
    cfg.mode = ProximityMode::First;
  else if (o.mode == "second")
    cfg.mode = ProximityMode::Second;
  else
    throw ValidationError("--mode must be first or second");
  if (o.kind == "glace")
    cfg.kind = ModelKind::Glace;
  else if (o.kind == "lace")
    cfg.kind = ModelKind::Lace;
  else
    throw ValidationError("--kind must be glace or lace");
  if (o.activation == "relu")
    cfg.hidden_relu = true;
  else if (o.activation != "linear")
    throw ValidationError("--hidden-activation must be linear or relu");
  cfg.embed_dim = o.dim;
  cfg.hidden_dim = o.hidden;
  cfg.negatives = o.negatives;
  cfg.batch_size = o.batch;
  cfg.learning_rate = o.lr;
  cfg.max_iters = o.iters;
  cfg.patience = o.patience;
  cfg.val_check_every = o.val_check_every;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.symmetric_kl = resolve_symmetric(o.kl, o.in.directed);
  return cfg;
}

void put_input_meta(RunManifest& m, const InputOpts& in) {
  m.set("edges", in.edges);
  m.set("attrs", in.attrs);
  if (!in.labels.empty()) m.set("labels", in.labels);
  m.set_flag("directed", in.directed);
  m.set("x-edges-digest", file_digest(in.edges));
  m.set("x-attrs-digest", file_digest(in.attrs));
  if (!in.labels.empty()) m.set("x-labels-digest", file_digest(in.labels));
}

void put_train_flags(RunManifest& m, const TrainOpts& o) {
  put_input_meta(m, o.in);
  m.set("mode", o.mode);
  m.set("kind", o.kind);
  m.set("kl", o.kl);
  m.set("hidden-activation", o.activation);
  m.set("dim", static_cast<long long>(o.dim));
  m.set("hidden", static_cast<long long>(o.hidden));
  m.set("negatives", static_cast<long long>(o.negatives));
  m.set("batch", static_cast<long long>(o.batch));
  m.set("lr", o.lr);
  m.set("iters", static_cast<long long>(o.iters));
  m.set("patience", static_cast<long long>(o.patience));
  m.set("val-check-every", static_cast<long long>(o.val_check_every));
  m.set("workers", static_cast<long long>(o.workers));
  m.set("test-frac", o.test_frac);
  m.set("val-frac", o.val_frac);
  m.set("seed", static_cast<long long>(o.seed));
  if (!o.split_manifest.empty()) m.set("split-manifest", o.split_manifest);
  if (!o.resume.empty()) m.set("resume", o.resume);
  m.set("out", o.out);
  m.set("x-artifact-version", std::string("glace 0.1.0"));
}

std::vector<ModelParams> load_models(const std::string& checkpoint,
                                     const std::vector<std::string>& concat) {
  if (!checkpoint.empty() && !concat.empty())
    throw ValidationError("--checkpoint and --concat are mutually exclusive");
  std::vector<ModelParams> models;
  if (!concat.empty()) {
    if (concat.size() != 2)
      throw ValidationError("--concat takes exactly two checkpoints");
    models.push_back(load_checkpoint(concat[0]));
    models.push_back(load_checkpoint(concat[1]));
    if (models[0].embed_dim() != models[1].embed_dim() ||
        models[0].input_dim() != models[1].input_dim())
      throw ValidationError("concatenated checkpoints disagree on dimensions");
    if (models[0].kind != models[1].kind)
      throw ValidationError("concatenated checkpoints disagree on model kind");
  } else if (!checkpoint.empty()) {
    models.push_back(load_checkpoint(checkpoint));
  } else {
    throw ValidationError("a --checkpoint (or --concat pair) is required");
  }
  return models;
}

void echo_and_write(const EvalReport& report, const std::string& out_dir,
                    const std::string& filename) {
  std::cout << report.to_text();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    report.write(fs::path(out_dir) / filename);
  }
}

}  // namespace

int cmd_train(const TrainOpts& opts) {
  WallClock clock;
  const AttributedGraph g = load_inputs(opts.in);
  std::cout << "loaded graph: nodes=" << g.num_nodes()
            << " edges=" << g.num_edges() << " attr_dim=" << g.attr_dim()
            << (g.directed() ? " directed" : " undirected") << '\n';

  fs::create_directories(opts.out);
  const fs::path out_dir(opts.out);

  EdgeSplit split;
  fs::path split_path;
  if (!opts.split_manifest.empty()) {
    split = read_split_manifest(opts.split_manifest, g);
    split_path = opts.split_manifest;
  } else {
    split = split_edges(g, opts.test_frac, opts.val_frac, opts.seed);
    split_path = out_dir / "split_manifest.txt";
    write_split_manifest(split_path, g, split);
  }

  TrainConfig cfg = to_train_config(opts);
  std::ofstream log(out_dir / "train_log.tsv");
  if (!log)
    throw ValidationError("cannot write training log under " + opts.out);
  cfg.log = &log;

  ModelParams model;
  TrainReport report;
  if (!opts.resume.empty()) {
    ModelParams start = load_checkpoint(opts.resume);
    std::tie(model, report) = train_from(g, split, cfg, start);
  } else {
    std::tie(model, report) = train(g, split, cfg);
  }

  const fs::path ckpt = out_dir / "checkpoint.bin";
  save_checkpoint(ckpt, model);
  write_id_map(out_dir / "id_map.tsv", g);

  RunManifest manifest;
  manifest.set("command", std::string("train"));
  put_train_flags(manifest, opts);
  manifest.set("x-split-manifest", split_path.string());
  manifest.set("x-split-digest", file_digest(split_path));
  manifest.set("x-checkpoint", ckpt.string());
  manifest.set("x-checkpoint-digest", file_digest(ckpt));
  manifest.set("x-iterations-run", static_cast<long long>(report.iterations_run));
  manifest.set("x-best-iteration", static_cast<long long>(report.best_iteration));
  if (!report.val_auc_history.empty()) {
    double best = -1.0;
    for (const auto& [it, auc] : report.val_auc_history) best = std::max(best, auc);
    manifest.set("x-best-val-auc", best);
  }
  manifest.set("x-wall-clock-sec", clock.seconds());
  manifest.write(out_dir / "manifest.txt");

  std::cout << "trained: iterations=" << report.iterations_run
            << " best_iteration=" << report.best_iteration
            << " wall_clock_sec=" << report.wall_clock_sec << '\n'
            << "checkpoint: " << ckpt.string() << '\n';
  return 0;
}

int cmd_eval_lp(const EvalLpOpts& opts) {
  WallClock clock;
  const AttributedGraph g = load_inputs(opts.in);
  if (opts.split_manifest.empty())
    throw ValidationError("eval-lp needs --split-manifest from the training run");
  const EdgeSplit split = read_split_manifest(opts.split_manifest, g);
  if (split.test_pos.empty() || split.test_neg.empty())
    throw ValidationError("split manifest has no test pairs");

  const auto models = load_models(opts.checkpoint, opts.concat);
  for (const auto& m : models)
    if (m.input_dim() != g.attr_dim())
      throw ValidationError("checkpoint input dimension does not match graph");

  std::vector<const ModelParams*> ptrs;
  for (const auto& m : models) ptrs.push_back(&m);

  std::vector<std::pair<int, int>> pos;
  for (const Edge& e : split.test_pos) pos.emplace_back(e.src, e.dst);
  const auto [auc, ap] = evaluate_link_prediction(
      ptrs, g.attribute_rows(), pos, split.test_neg, !opts.no_normalize);

  EvalReport report;
  report.task = "link_prediction";
  report.auc = auc;
  report.ap = ap;
  report.seed = split.seed;
  report.config["models"] = std::to_string(models.size());
  report.config["normalize"] = opts.no_normalize ? "false" : "true";
  if (!opts.checkpoint.empty())
    report.config["checkpoint-digest"] = file_digest(opts.checkpoint);
  for (std::size_t k = 0; k < opts.concat.size(); ++k)
    report.config["checkpoint" + std::to_string(k) + "-digest"] =
        file_digest(opts.concat[k]);
  report.config["split-digest"] = file_digest(opts.split_manifest);
  report.config["test-pairs"] = std::to_string(pos.size());
  echo_and_write(report, opts.out, "eval_lp.txt");

  if (!opts.out.empty()) {
    RunManifest manifest;
    manifest.set("command", std::string("eval-lp"));
    put_input_meta(manifest, opts.in);
    if (!opts.checkpoint.empty()) manifest.set("checkpoint", opts.checkpoint);
    manifest.set("split-manifest", opts.split_manifest);
    manifest.set_flag("no-normalize", opts.no_normalize);
    manifest.set("x-wall-clock-sec", clock.seconds());
    manifest.write(fs::path(opts.out) / "manifest.txt");
  }
  return 0;
}

namespace {

std::vector<double> parse_frac_spec(const std::string& spec) {
  // "0.5" or "0.1:0.9:0.1"
  std::vector<double> out;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(spec));
    return out;
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw ValidationError("--train-frac sweep must be start:end:step");
  const double start = std::stod(spec.substr(0, c1));
  const double end = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (!(step > 0.0)) throw ValidationError("sweep step must be positive");
  for (double f = start; f <= end + 1e-9; f += step) out.push_back(f);
  return out;
}

}  // namespace

int cmd_eval_nc(const EvalNcOpts& opts) {
  const AttributedGraph g = load_inputs(opts.in);
  if (opts.in.labels.empty())
    throw ValidationError("eval-nc needs --labels");
  const auto [labels, class_names] = load_labels(opts.in.labels, g);

  const auto models = load_models(opts.checkpoint, opts.concat);
  for (const auto& m : models)
    if (m.input_dim() != g.attr_dim())
      throw ValidationError("checkpoint input dimension does not match graph");

  // Feature matrix: mu (optionally with log sigma); concatenated across models.
  std::vector<std::vector<double>> feats =
      embedding_features(models[0], g.attribute_rows(), opts.with_sigma);
  for (std::size_t k = 1; k < models.size(); ++k) {
    const auto extra =
        embedding_features(models[k], g.attribute_rows(), opts.with_sigma);
    for (int v = 0; v < g.num_nodes(); ++v)
      feats[v].insert(feats[v].end(), extra[v].begin(), extra[v].end());
  }

  const auto fracs = parse_frac_spec(opts.train_frac);
  std::ofstream sweep_out;
  if (!opts.out.empty() && fracs.size() > 1) {
    fs::create_directories(opts.out);
    sweep_out.open(fs::path(opts.out) / "nc_sweep.tsv");
    sweep_out << "train_frac\tf1_micro\tf1_macro\n";
  }

  EvalReport report;
  for (double frac : fracs) {
    ClassificationConfig cfg;
    cfg.train_frac = frac;
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    const auto [micro, macro] = node_classification(
        feats, labels, static_cast<int>(class_names.size()), cfg);
    if (fracs.size() > 1) {
      std::cout << "train_frac=" << frac << " f1_micro=" << micro
                << " f1_macro=" << macro << '\n';
      if (sweep_out) sweep_out << frac << '\t' << micro << '\t' << macro << '\n';
    }
    report.f1_micro = micro;
    report.f1_macro = macro;
  }

  report.task = "node_classification";
  report.seed = opts.seed;
  report.config["train-frac"] = opts.train_frac;
  report.config["trials"] = std::to_string(opts.trials);
  report.config["with-sigma"] = opts.with_sigma ? "true" : "false";
  report.config["classes"] = std::to_string(class_names.size());
  if (!opts.checkpoint.empty())
    report.config["checkpoint-digest"] = file_digest(opts.checkpoint);
  if (fracs.size() == 1) {
    echo_and_write(report, opts.out, "eval_nc.txt");
  } else if (!opts.out.empty()) {
    report.write(fs::path(opts.out) / "eval_nc.txt");
  }
  return 0;
}

int cmd_eval_inductive(const EvalInductiveOpts& opts) {
  WallClock clock;
  const TrainOpts& t = opts.train;
  const AttributedGraph g = load_inputs(t.in);
  TrainConfig cfg = to_train_config(t);

  EvalReport report;
  report.task = "inductive_link_prediction";
  report.seed = t.seed;

  if (opts.hide_frac == 0.0) {
    // Degenerate case: nothing hidden reduces to transductive link
    // prediction on an ordinary edge split.
    const EdgeSplit split = split_edges(g, t.test_frac, t.val_frac, t.seed);
    auto [model, train_report] = train(g, split, cfg);
    std::vector<std::pair<int, int>> pos;
    for (const Edge& e : split.test_pos) pos.emplace_back(e.src, e.dst);
    const ModelParams* mp = &model;
    const auto [auc, ap] = evaluate_link_prediction(
        {&mp, 1}, g.attribute_rows(), pos, split.test_neg);
    report.auc = auc;
    report.ap = ap;
  } else {
    const InductiveSplit ind = hide_nodes(g, opts.hide_frac, t.seed);
    // Carve a validation set out of the visible edges for early stopping;
    // the hidden pairs stay untouched until final evaluation.
    EdgeSplit vsplit;
    if (t.val_frac > 0.0) {
      EdgeSplit carve = split_edges(ind.visible_graph, t.val_frac, 0.0,
                                    derive_seed(t.seed, "inductive-val"));
      vsplit.train_edges = std::move(carve.train_edges);
      vsplit.val_pos = std::move(carve.test_pos);
      vsplit.val_neg = std::move(carve.test_neg);
    } else {
      vsplit.train_edges = ind.visible_graph.edges();
    }
    vsplit.seed = t.seed;

    auto [model, train_report] = train(ind.visible_graph, vsplit, cfg);
    const auto [auc, ap] = inductive_link_prediction(model, ind);
    report.auc = auc;
    report.ap = ap;
    report.config["hidden-nodes"] = std::to_string(ind.hidden_nodes.size());
    report.config["eval-pairs"] = std::to_string(ind.eval_pos.size());

    if (!t.out.empty()) {
      fs::create_directories(t.out);
      save_checkpoint(fs::path(t.out) / "checkpoint.bin", model);
    }
  }

  report.config["hide-frac"] = std::to_string(opts.hide_frac);
  report.config["mode"] = t.mode;
  report.config["kind"] = t.kind;
  echo_and_write(report, t.out, "eval_inductive.txt");

  if (!t.out.empty()) {
    RunManifest manifest;
    manifest.set("command", std::string("eval-inductive"));
    put_train_flags(manifest, t);
    manifest.set("hide-frac", opts.hide_frac);
    manifest.set("x-wall-clock-sec", clock.seconds());
    manifest.write(fs::path(t.out) / "manifest.txt");
  }
  return 0;
}

int cmd_export(const ExportOpts& opts) {
  const AttributedGraph g = load_inputs(opts.in);
  const ModelParams model = load_checkpoint(opts.checkpoint);
  if (model.input_dim() != g.attr_dim())
    throw ValidationError("checkpoint input dimension does not match graph");
  if (opts.out.empty()) throw ValidationError("--out file is required");

  const bool include_sigma =
      model.kind == ModelKind::Glace && !opts.no_export_sigma;
  export_embeddings(model, g, opts.out, include_sigma);

  RunManifest manifest;
  manifest.set("command", std::string("export"));
  put_input_meta(manifest, opts.in);
  manifest.set("checkpoint", opts.checkpoint);
  manifest.set("out", opts.out);
  manifest.set("x-embeddings-digest", file_digest(opts.out));
  manifest.write(opts.out + ".manifest.txt");
  std::cout << "exported " << g.num_nodes() << " embeddings to " << opts.out
            << '\n';
  return 0;
}

int cmd_datagen(const DatagenOpts& opts) {
  CitationConfig cfg = citation_preset(opts.preset);
  if (opts.seed != 0) cfg.seed = opts.seed;
  const SyntheticDataset data = make_citation_graph(cfg);
  const std::string stem = opts.stem.empty() ? opts.preset : opts.stem;
  const auto paths = write_dataset(data, opts.out_dir, stem);
  for (const auto& p : paths)
    std::cout << p.string() << "  fnv1a64=" << file_digest(p) << '\n';
  std::cout << "nodes=" << data.graph.num_nodes()
            << " edges=" << data.graph.num_edges()
            << " attr_dim=" << data.graph.attr_dim()
            << " classes=" << data.class_names.size() << '\n';
  return 0;
}

}  // namespace glace::cli
