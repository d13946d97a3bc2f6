#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "glace/encoder.hpp"
#include "glace/errors.hpp"
#include "glace/run_manifest.hpp"

namespace {

using namespace glace::cli;

void add_input_flags(CLI::App* cmd, InputOpts& in, bool need_labels = false) {
  cmd->add_option("--edges", in.edges, "Edge file: 'src dst [weight]' lines");
  cmd->add_option("--attrs", in.attrs,
                  "Attribute file: 'num_nodes D' header, then 'row col value' "
                  "triplets or a 'dense' CSV block");
  cmd->add_option("--labels", in.labels, "Label file: 'node_id label' lines");
  (void)need_labels;
  cmd->add_flag("--directed", in.directed, "Treat edges as directed arcs");
}

// Plain `key = value` config support with CLI-beats-config precedence:
// entries are applied only to options the command line left untouched.
// `[section]` headers and `x-*` metadata from run manifests are ignored, so a
// manifest replays its run directly.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  const glace::RunManifest cfg = glace::RunManifest::read(path);
  for (const auto& [key, value] : cfg.entries()) {
    if (key == "command" || key.rfind("x-", 0) == 0) continue;
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw glace::ValidationError("config entry '" + key + " = " + value +
                                   "': " + e.what());
    }
  }
}

// Options that must be present once flags and config are merged.
int require_set(const CLI::App* cmd,
                std::initializer_list<std::pair<const char*, const std::string*>> fields) {
  for (const auto& [name, value] : fields) {
    if (value->empty()) {
      std::cerr << cmd->get_name() << ": missing required option --" << name
                << " (see --help)\n";
      return 1;
    }
  }
  return 0;
}

void add_train_flags(CLI::App* cmd, TrainOpts& o) {
  add_input_flags(cmd, o.in);
  cmd->add_option("--mode", o.mode, "Proximity objective: first | second")
      ->check(CLI::IsMember({"first", "second"}))
      ->capture_default_str();
  cmd->add_option("--kind", o.kind, "Model kind: glace (Gaussian) | lace (point)")
      ->check(CLI::IsMember({"glace", "lace"}))
      ->capture_default_str();
  cmd->add_option("--kl", o.kl,
                  "Dissimilarity: auto (symmetric iff undirected) | symmetric | asymmetric")
      ->check(CLI::IsMember({"auto", "symmetric", "asymmetric"}))
      ->capture_default_str();
  cmd->add_option("--hidden-activation", o.activation,
                  "Hidden layer activation: linear | relu")
      ->check(CLI::IsMember({"linear", "relu"}))
      ->capture_default_str();
  cmd->add_option("--dim", o.dim, "Embedding dimension L")->capture_default_str();
  cmd->add_option("--hidden", o.hidden, "Hidden width m")->capture_default_str();
  cmd->add_option("--negatives", o.negatives, "Negative samples per edge")
      ->capture_default_str();
  cmd->add_option("--batch", o.batch, "Edges per iteration")->capture_default_str();
  cmd->add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--iters", o.iters, "Maximum iterations")->capture_default_str();
  cmd->add_option("--patience", o.patience,
                  "Early stop after this many non-improving validation checks")
      ->capture_default_str();
  cmd->add_option("--val-check-every", o.val_check_every,
                  "Iterations between validation checks")
      ->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads per batch")
      ->capture_default_str();
  cmd->add_option("--test-frac", o.test_frac, "Held-out test edge fraction")
      ->capture_default_str();
  cmd->add_option("--val-frac", o.val_frac, "Validation edge fraction")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Run seed; all randomness derives from it")
      ->capture_default_str();
  cmd->add_option("--split-manifest", o.split_manifest,
                  "Replay an existing split instead of resplitting");
  cmd->add_option("--resume", o.resume, "Continue from a checkpoint");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLACE: Gaussian embeddings for attributed graphs"};
  app.require_subcommand(1);

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train an embedding model");
  add_train_flags(train_cmd, train_opts);
  train_cmd->add_option("--out", train_opts.out, "Output directory");

  EvalLpOpts lp_opts;
  auto* lp_cmd = app.add_subcommand("eval-lp", "Link prediction on a held-out split");
  add_input_flags(lp_cmd, lp_opts.in);
  lp_cmd->add_option("--checkpoint", lp_opts.checkpoint, "Trained model checkpoint");
  lp_cmd->add_option("--concat", lp_opts.concat,
                     "Two checkpoints scored jointly (first+second setting)")
      ->expected(2);
  lp_cmd->add_option("--split-manifest", lp_opts.split_manifest,
                     "Split manifest from the training run");
  lp_cmd->add_flag("--no-normalize", lp_opts.no_normalize,
                   "Raw score sum for --concat instead of min-max normalization");
  lp_cmd->add_option("--out", lp_opts.out, "Directory for report and manifest");


  EvalNcOpts nc_opts;
  auto* nc_cmd = app.add_subcommand("eval-nc", "Node classification with logistic regression");
  add_input_flags(nc_cmd, nc_opts.in, /*need_labels=*/true);
  nc_cmd->add_option("--checkpoint", nc_opts.checkpoint, "Trained model checkpoint");
  nc_cmd->add_option("--concat", nc_opts.concat, "Two checkpoints; features concatenated")
      ->expected(2);
  nc_cmd->add_option("--train-frac", nc_opts.train_frac,
                     "Labeled fraction, a value ('0.5') or sweep ('0.1:0.9:0.1')")
      ->capture_default_str();
  nc_cmd->add_option("--trials", nc_opts.trials, "Trials to average over")
      ->capture_default_str();
  nc_cmd->add_flag("--with-sigma", nc_opts.with_sigma,
                   "Append log-variances to the feature vectors");
  nc_cmd->add_option("--seed", nc_opts.seed, "Trial seed")->capture_default_str();
  nc_cmd->add_option("--out", nc_opts.out, "Directory for report files");


  EvalInductiveOpts ind_opts;
  auto* ind_cmd = app.add_subcommand(
      "eval-inductive", "Hide nodes, train on the rest, score the hidden pairs");
  add_train_flags(ind_cmd, ind_opts.train);
  ind_cmd->add_option("--hide-frac", ind_opts.hide_frac,
                      "Fraction of nodes to hide (0 = transductive)")
      ->check(CLI::Range(0.0, 0.99))
      ->capture_default_str();
  ind_cmd->add_option("--out", ind_opts.train.out, "Output directory");


  ExportOpts ex_opts;
  auto* ex_cmd = app.add_subcommand("export", "Write embeddings as TSV");
  add_input_flags(ex_cmd, ex_opts.in);
  ex_cmd->add_option("--checkpoint", ex_opts.checkpoint, "Trained model checkpoint");
  ex_cmd->add_option("--out", ex_opts.out, "Output TSV file");
  ex_cmd->add_flag("--export-sigma", ex_opts.export_sigma,
                   "Require variance columns (GLACE checkpoints only)");
  ex_cmd->add_flag("--no-export-sigma", ex_opts.no_export_sigma,
                   "Drop variance columns");


  DatagenOpts dg_opts;
  auto* dg_cmd = app.add_subcommand(
      "datagen", "Generate a synthetic citation-style benchmark dataset");
  dg_cmd->add_option("--preset", dg_opts.preset, "cora_ml | citeseer | demo")
      ->check(CLI::IsMember({"cora_ml", "citeseer", "demo"}))
      ->capture_default_str();
  dg_cmd->add_option("--out-dir", dg_opts.out_dir, "Output directory")
      ->capture_default_str();
  dg_cmd->add_option("--stem", dg_opts.stem, "File stem (defaults to the preset name)");
  dg_cmd->add_option("--seed", dg_opts.seed, "Override the preset seed (0 keeps it)");

  std::string config_path;
  for (auto* cmd : {train_cmd, lp_cmd, nc_cmd, ind_cmd, ex_cmd})
    cmd->add_option("--config", config_path,
                    "Read options from a key = value file (run manifests work)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors land on exit code 1
  }

  try {
    for (auto* cmd : {train_cmd, lp_cmd, nc_cmd, ind_cmd, ex_cmd})
      if (cmd->parsed()) apply_config(cmd, config_path);

    if (*train_cmd) {
      if (int rc = require_set(train_cmd, {{"edges", &train_opts.in.edges},
                                           {"attrs", &train_opts.in.attrs},
                                           {"out", &train_opts.out}}))
        return rc;
      return cmd_train(train_opts);
    }
    if (*lp_cmd) {
      if (int rc = require_set(lp_cmd, {{"edges", &lp_opts.in.edges},
                                        {"attrs", &lp_opts.in.attrs},
                                        {"split-manifest", &lp_opts.split_manifest}}))
        return rc;
      return cmd_eval_lp(lp_opts);
    }
    if (*nc_cmd) {
      if (int rc = require_set(nc_cmd, {{"edges", &nc_opts.in.edges},
                                        {"attrs", &nc_opts.in.attrs},
                                        {"labels", &nc_opts.in.labels}}))
        return rc;
      return cmd_eval_nc(nc_opts);
    }
    if (*ind_cmd) {
      if (int rc = require_set(ind_cmd, {{"edges", &ind_opts.train.in.edges},
                                         {"attrs", &ind_opts.train.in.attrs}}))
        return rc;
      return cmd_eval_inductive(ind_opts);
    }
    if (*ex_cmd) {
      if (int rc = require_set(ex_cmd, {{"edges", &ex_opts.in.edges},
                                        {"attrs", &ex_opts.in.attrs},
                                        {"checkpoint", &ex_opts.checkpoint},
                                        {"out", &ex_opts.out}}))
        return rc;
      if (ex_opts.export_sigma && ex_opts.no_export_sigma) {
        std::cerr << "error: --export-sigma conflicts with --no-export-sigma\n";
        return 1;
      }
      // Asking for variance columns from a point model is a usage error.
      if (ex_opts.export_sigma) {
        const auto model = glace::load_checkpoint(ex_opts.checkpoint);
        if (model.kind == glace::ModelKind::Lace) {
          std::cerr << "error: --export-sigma is meaningless for a lace checkpoint\n";
          return 1;
        }
      }
      return cmd_export(ex_opts);
    }
    if (*dg_cmd) return cmd_datagen(dg_opts);
  } catch (const glace::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const glace::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const glace::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
