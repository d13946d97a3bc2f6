#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glace/graph.hpp"

namespace glace {

/// Multinomial logistic regression with L2 regularization, fit by full-batch
/// gradient descent (step size from a power-iteration Lipschitz estimate).
/// Self-contained so evaluation carries no ML dependency.
struct LogisticModel {
  int dim = 0;
  int num_classes = 0;
  // (dim + 1) x K row-major; last row is the unregularized bias.
  std::vector<double> weights;

  int predict(const SparseRow& x) const;
  std::vector<double> class_scores(const SparseRow& x) const;
};

struct LogisticConfig {
  double l2 = 1e-4;
  int max_epochs = 500;
  double grad_tol = 1e-5;  // stop when the full-gradient L2 norm drops below
};

/// Mean cross-entropy plus (l2/2)*||W||^2 over the weight rows (bias
/// excluded), and its gradient. Exposed for gradient checking.
double logistic_loss_grad(const std::vector<SparseRow>& X,
                          const std::vector<int>& y, int num_classes,
                          std::span<const double> weights, double l2,
                          std::vector<double>* grad);

/// `dim` is the feature dimension (columns may be absent from the training
/// rows but still appear at prediction time).
LogisticModel fit_logistic(const std::vector<SparseRow>& X,
                           const std::vector<int>& y, int num_classes, int dim,
                           const LogisticConfig& config = {});

/// Dense rows -> sparse rows (zeros dropped).
std::vector<SparseRow> to_sparse_rows(const std::vector<std::vector<double>>& dense);

}  // namespace glace
