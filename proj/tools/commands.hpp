#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace glace::cli {

struct InputOpts {
  std::string edges;
  std::string attrs;
  std::string labels;
  bool directed = false;
};

struct TrainOpts {
  InputOpts in;
  std::string mode = "first";        // first | second
  std::string kind = "glace";        // glace | lace
  std::string kl = "auto";           // auto | symmetric | asymmetric
  std::string activation = "linear"; // linear | relu
  int dim = 64;
  int hidden = 512;
  int negatives = 5;
  int batch = 512;
  double lr = 1e-3;
  int iters = 2000;
  int patience = 10;
  int val_check_every = 25;
  int workers = 1;
  double test_frac = 0.2;
  double val_frac = 0.05;
  std::uint64_t seed = 1;
  std::string split_manifest;  // load an existing split instead of resplitting
  std::string resume;          // checkpoint to continue from
  std::string out;             // output directory
};

struct EvalLpOpts {
  InputOpts in;
  std::string checkpoint;
  std::vector<std::string> concat;  // two checkpoints for the 1st+2nd setting
  std::string split_manifest;
  bool no_normalize = false;
  std::string out;
};

struct EvalNcOpts {
  InputOpts in;
  std::string checkpoint;
  std::vector<std::string> concat;
  std::string train_frac = "0.5";  // single value or start:end:step sweep
  int trials = 10;
  bool with_sigma = false;
  std::uint64_t seed = 1;
  std::string out;
};

struct EvalInductiveOpts {
  TrainOpts train;
  double hide_frac = 0.1;
};

struct ExportOpts {
  InputOpts in;
  std::string checkpoint;
  std::string out;
  bool export_sigma = false;     // explicit request (clashes with lace)
  bool no_export_sigma = false;  // drop sigma columns for glace
};

struct DatagenOpts {
  std::string preset = "demo";  // cora_ml | citeseer | demo
  std::string out_dir = "data";
  std::string stem;
  std::uint64_t seed = 0;  // 0: keep the preset's pinned seed
};

int cmd_train(const TrainOpts& opts);
int cmd_eval_lp(const EvalLpOpts& opts);
int cmd_eval_nc(const EvalNcOpts& opts);
int cmd_eval_inductive(const EvalInductiveOpts& opts);
int cmd_export(const ExportOpts& opts);
int cmd_datagen(const DatagenOpts& opts);

}  // namespace glace::cli
