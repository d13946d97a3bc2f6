#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "glace/gauss.hpp"
#include "glace/graph.hpp"

namespace glace {

enum class ProximityMode { First = 1, Second = 2 };
enum class ModelKind { Glace = 0, Lace = 1 };

/// Parameters of one attribute encoder: shared affine layer plus mean and
/// covariance heads. All matrices are row-major with the row indexed by the
/// input dimension, so sparse inputs touch only their own rows.
///   u     = act(W^T x + b)            W: D x m
///   mu    = W_mu^T u + b_mu           W_mu: m x L
///   sigma = ELU(W_sigma^T u + b_sigma) + 1
struct EncoderParams {
  int input_dim = 0;   // D
  int hidden_dim = 0;  // m
  int embed_dim = 0;   // L
  std::vector<double> W;        // D*m
  std::vector<double> b;        // m
  std::vector<double> W_mu;     // m*L
  std::vector<double> b_mu;     // L
  std::vector<double> W_sigma;  // m*L
  std::vector<double> b_sigma;  // L
};

/// Glorot-uniform weights, zero biases. Deterministic given seed.
EncoderParams init_params(int input_dim, int hidden_dim, int embed_dim,
                          std::uint64_t seed);

/// Forward intermediates needed by the backward pass.
struct EncodeCache {
  std::vector<double> u;          // hidden activation
  std::vector<double> u_pre;      // pre-activation (kept only when relu)
  std::vector<double> sigma_pre;  // covariance head pre-ELU
};

/// Gradients of all six tensors of one encoder.
struct EncoderGrads {
  std::vector<double> W, b, W_mu, b_mu, W_sigma, b_sigma;

  void resize_like(const EncoderParams& p);
  void zero();
  void add(const EncoderGrads& other);
};

/// Variances are clamped to this floor after the ELU(.)+1 shift: the shift is
/// positive in exact arithmetic but underflows to 0 in floating point for
/// very negative pre-activations, which would make KL infinite.
inline constexpr double kSigmaClamp = 1e-6;

/// Full Gaussian head. Cost is proportional to nnz(x) plus the head sizes.
GaussianEmbedding encode(const EncoderParams& p, const SparseRow& x,
                         bool hidden_relu = false,
                         EncodeCache* cache = nullptr);

/// Allocation-free variant for hot loops.
void encode_into(const EncoderParams& p, const SparseRow& x, bool hidden_relu,
                 GaussianEmbedding& out, EncodeCache& cache);

/// Mean head only (LACE point embeddings).
std::vector<double> encode_point(const EncoderParams& p, const SparseRow& x,
                                 bool hidden_relu = false,
                                 EncodeCache* cache = nullptr);

/// Chain-rule gradients for all six tensors given upstream gradients with
/// respect to mu and sigma (pass an empty grad_sigma for point mode).
/// Accumulates into `out`; pass `grad_x` to also get the input-side gradient.
void encode_backward(const EncoderParams& p, const SparseRow& x,
                     const EncodeCache& cache, std::span<const double> grad_mu,
                     std::span<const double> grad_sigma, bool hidden_relu,
                     EncoderGrads& out, std::vector<double>* grad_x = nullptr);

/// A trained model: main encoder, the primed context-encoder copy (present
/// iff second-order), and the switches that fix its scoring semantics.
struct ModelParams {
  EncoderParams main;
  std::optional<EncoderParams> context;
  ProximityMode mode = ProximityMode::First;
  ModelKind kind = ModelKind::Glace;
  bool symmetric = true;    // symmetric vs one-sided KL dissimilarity
  bool hidden_relu = false;
  std::uint64_t seed = 0;

  int embed_dim() const { return main.embed_dim; }
  int input_dim() const { return main.input_dim; }
};

/// Binary checkpoint container, versioned; write/read round-trips are
/// bit-exact. Little-endian doubles in row-major order.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& m);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace glace
