#include "glace/gauss.hpp"

#include <cmath>
#include <cstddef>

#include "glace/errors.hpp"

namespace glace {

namespace {

void check_pair(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  if (p.mu.size() != p.sigma.size() || q.mu.size() != q.sigma.size() ||
      p.mu.size() != q.mu.size())
    throw ValidationError("gaussian dimension mismatch");
  for (std::size_t l = 0; l < p.mu.size(); ++l) {
    if (!std::isfinite(p.mu[l]) || !std::isfinite(q.mu[l]) ||
        !std::isfinite(p.sigma[l]) || !std::isfinite(q.sigma[l]))
      throw ValidationError("gaussian embedding has non-finite components");
    if (!(p.sigma[l] > 0.0) || !(q.sigma[l] > 0.0))
      throw ValidationError("gaussian variance must be positive");
    if (p.sigma[l] < kVarianceFloor || q.sigma[l] < kVarianceFloor)
      throw ValidationError("gaussian variance below floor");
  }
}

// Unchecked one-sided KL, D_KL(p || q).
double kl_raw(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  double acc = 0.0;
  for (std::size_t l = 0; l < p.mu.size(); ++l) {
    const double vp = p.sigma[l];
    const double vq = q.sigma[l];
    const double dm = q.mu[l] - p.mu[l];
    acc += std::log(vq / vp) + (vp + dm * dm) / vq - 1.0;
  }
  return 0.5 * acc;
}

// Accumulates c * grad of D_KL(p || q) into the four buffers.
void kl_grad_acc(const GaussianEmbedding& p, const GaussianEmbedding& q,
                 double c, std::vector<double>& gmu_p,
                 std::vector<double>& gsig_p, std::vector<double>& gmu_q,
                 std::vector<double>& gsig_q) {
  for (std::size_t l = 0; l < p.mu.size(); ++l) {
    const double vp = p.sigma[l];
    const double vq = q.sigma[l];
    const double dm = q.mu[l] - p.mu[l];
    gmu_p[l] += c * (-dm / vq);
    gmu_q[l] += c * (dm / vq);
    gsig_p[l] += c * 0.5 * (1.0 / vq - 1.0 / vp);
    gsig_q[l] += c * 0.5 * (1.0 / vq - (vp + dm * dm) / (vq * vq));
  }
}

}  // namespace

double kl(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  check_pair(p, q);
  return kl_raw(p, q);
}

double dissimilarity(const GaussianEmbedding& zi, const GaussianEmbedding& zj,
                     bool symmetric) {
  check_pair(zi, zj);
  if (symmetric) return 0.5 * (kl_raw(zi, zj) + kl_raw(zj, zi));
  return kl_raw(zj, zi);
}

double first_order_prob(double d) {
  // 1 / (1 + e^d); saturates to 0 for large d without overflow.
  if (d > 0.0) {
    const double e = std::exp(-d);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(d));
}

void dissimilarity_grad_into(const GaussianEmbedding& zi,
                             const GaussianEmbedding& zj, bool symmetric,
                             DissimilarityGrad& out) {
  check_pair(zi, zj);
  const std::size_t L = zi.mu.size();
  out.mu_i.assign(L, 0.0);
  out.sigma_i.assign(L, 0.0);
  out.mu_j.assign(L, 0.0);
  out.sigma_j.assign(L, 0.0);
  if (symmetric) {
    kl_grad_acc(zi, zj, 0.5, out.mu_i, out.sigma_i, out.mu_j, out.sigma_j);
    kl_grad_acc(zj, zi, 0.5, out.mu_j, out.sigma_j, out.mu_i, out.sigma_i);
  } else {
    // d = D_KL(zj || zi): zj plays p, zi plays q.
    kl_grad_acc(zj, zi, 1.0, out.mu_j, out.sigma_j, out.mu_i, out.sigma_i);
  }
}

DissimilarityGrad dissimilarity_grad(const GaussianEmbedding& zi,
                                     const GaussianEmbedding& zj,
                                     bool symmetric) {
  DissimilarityGrad out;
  dissimilarity_grad_into(zi, zj, symmetric, out);
  return out;
}

}  // namespace glace
