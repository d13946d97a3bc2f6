#include "glace/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "glace/errors.hpp"

namespace glace {

namespace {

// Class scores for one sample under (dim+1) x K weights (last row = bias).
void raw_scores(std::span<const double> w, int dim, int K, const SparseRow& x,
                std::vector<double>& out) {
  out.assign(w.begin() + static_cast<std::size_t>(dim) * K,
             w.begin() + static_cast<std::size_t>(dim + 1) * K);
  for (const auto& [col, val] : x.nz) {
    if (col < 0 || col >= dim)
      throw ValidationError("feature index outside classifier dimension");
    const double* row = w.data() + static_cast<std::size_t>(col) * K;
    for (int k = 0; k < K; ++k) out[k] += val * row[k];
  }
}

void softmax_inplace(std::vector<double>& s) {
  const double mx = *std::max_element(s.begin(), s.end());
  double sum = 0.0;
  for (double& v : s) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : s) v /= sum;
}

// Largest eigenvalue of X^T X (bias column included) by power iteration;
// fixed start vector keeps the fit deterministic.
double lipschitz_bound(const std::vector<SparseRow>& X, int dim) {
  const std::size_t n = X.size();
  std::vector<double> w(dim + 1, 1.0 / std::sqrt(dim + 1.0));
  std::vector<double> t(n), z(dim + 1);
  double lambda = 1.0;
  for (int it = 0; it < 40; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = w[dim];
      for (const auto& [col, val] : X[i].nz) acc += val * w[col];
      t[i] = acc;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [col, val] : X[i].nz) z[col] += val * t[i];
      z[dim] += t[i];
    }
    double norm = 0.0;
    for (double v : z) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 1.0;
    lambda = norm;
    for (std::size_t d = 0; d < z.size(); ++d) w[d] = z[d] / norm;
  }
  return lambda;
}

}  // namespace

std::vector<double> LogisticModel::class_scores(const SparseRow& x) const {
  std::vector<double> s;
  raw_scores(weights, dim, num_classes, x, s);
  return s;
}

int LogisticModel::predict(const SparseRow& x) const {
  const auto s = class_scores(x);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

double logistic_loss_grad(const std::vector<SparseRow>& X,
                          const std::vector<int>& y, int num_classes,
                          std::span<const double> weights, double l2,
                          std::vector<double>* grad) {
  if (X.size() != y.size())
    throw ValidationError("feature/label count mismatch");
  if (X.empty()) throw ValidationError("cannot fit on an empty training set");
  const int K = num_classes;
  const int dim = static_cast<int>(weights.size() / K) - 1;
  const double n = static_cast<double>(X.size());

  if (grad) grad->assign(weights.size(), 0.0);
  double loss = 0.0;
  std::vector<double> p;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (y[i] < 0 || y[i] >= K)
      throw ValidationError("label outside [0, num_classes)");
    raw_scores(weights, dim, K, X[i], p);
    softmax_inplace(p);
    loss += -std::log(std::max(p[y[i]], 1e-300));
    if (grad) {
      p[y[i]] -= 1.0;  // p - onehot
      double* gb = grad->data() + static_cast<std::size_t>(dim) * K;
      for (int k = 0; k < K; ++k) gb[k] += p[k] / n;
      for (const auto& [col, val] : X[i].nz) {
        double* gr = grad->data() + static_cast<std::size_t>(col) * K;
        for (int k = 0; k < K; ++k) gr[k] += val * p[k] / n;
      }
    }
  }
  loss /= n;

  // L2 on the weight rows; bias row unregularized.
  double reg = 0.0;
  for (int d = 0; d < dim; ++d) {
    for (int k = 0; k < K; ++k) {
      const double w = weights[static_cast<std::size_t>(d) * K + k];
      reg += w * w;
      if (grad) (*grad)[static_cast<std::size_t>(d) * K + k] += l2 * w;
    }
  }
  return loss + 0.5 * l2 * reg;
}

LogisticModel fit_logistic(const std::vector<SparseRow>& X,
                           const std::vector<int>& y, int num_classes, int dim,
                           const LogisticConfig& config) {
  if (num_classes < 2) throw ValidationError("need at least two classes");
  if (dim < 1) throw ValidationError("feature dimension must be >= 1");

  LogisticModel model;
  model.dim = dim;
  model.num_classes = num_classes;
  model.weights.assign(static_cast<std::size_t>(dim + 1) * num_classes, 0.0);

  // Gradient-descent step from the softmax curvature bound 0.5*lmax(X^T X)/n.
  const double lmax = lipschitz_bound(X, dim);
  const double lr = 1.0 / (0.5 * lmax / static_cast<double>(X.size()) + config.l2);

  std::vector<double> grad;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    logistic_loss_grad(X, y, num_classes, model.weights, config.l2, &grad);
    double gnorm = 0.0;
    for (double gv : grad) gnorm += gv * gv;
    if (std::sqrt(gnorm) < config.grad_tol) break;
    for (std::size_t i = 0; i < grad.size(); ++i)
      model.weights[i] -= lr * grad[i];
  }
  return model;
}

std::vector<SparseRow> to_sparse_rows(
    const std::vector<std::vector<double>>& dense) {
  std::vector<SparseRow> out(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (std::size_t d = 0; d < dense[i].size(); ++d)
      if (dense[i][d] != 0.0)
        out[i].nz.emplace_back(static_cast<int>(d), dense[i][d]);
  }
  return out;
}

}  // namespace glace
