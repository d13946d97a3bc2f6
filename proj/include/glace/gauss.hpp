#pragma once

#include <vector>

namespace glace {

/// Variances below this are rejected at this layer; enforcement (clamping)
/// lives in the encoder's covariance head.
inline constexpr double kVarianceFloor = 1e-6;

/// Diagonal Gaussian N(mu, diag(sigma)). `sigma` holds variances, not
/// standard deviations.
struct GaussianEmbedding {
  std::vector<double> mu;
  std::vector<double> sigma;

  std::size_t dim() const { return mu.size(); }
};

/// KL divergence D_KL(p || q) between diagonal Gaussians:
///   0.5 * sum_l [ log(sq_l/sp_l) + (sp_l + (mq_l - mp_l)^2) / sq_l - 1 ]
/// Throws ValidationError on dimension mismatch, non-finite components, or
/// variances below the floor.
double kl(const GaussianEmbedding& p, const GaussianEmbedding& q);

/// Dissimilarity between two node embeddings.
///   symmetric:  0.5 * (D_KL(zi||zj) + D_KL(zj||zi))
///   asymmetric: D_KL(zj||zi)
double dissimilarity(const GaussianEmbedding& zi, const GaussianEmbedding& zj,
                     bool symmetric);

/// First-order edge probability p_1 = 1 / (1 + exp(d)); maximal (= 0.5) at
/// d = 0 and strictly decreasing in d.
double first_order_prob(double d);

struct DissimilarityGrad {
  std::vector<double> mu_i, sigma_i;  // d(dissim)/d(mu_i), d(dissim)/d(sigma_i)
  std::vector<double> mu_j, sigma_j;
};

/// Exact partial derivatives of dissimilarity(zi, zj, symmetric) with respect
/// to both mean vectors and both variance vectors.
DissimilarityGrad dissimilarity_grad(const GaussianEmbedding& zi,
                                     const GaussianEmbedding& zj,
                                     bool symmetric);

/// In-place variant reusing caller-owned buffers (trainer hot path). Buffers
/// are resized to the embedding dimension and overwritten.
void dissimilarity_grad_into(const GaussianEmbedding& zi,
                             const GaussianEmbedding& zj, bool symmetric,
                             DissimilarityGrad& out);

}  // namespace glace
