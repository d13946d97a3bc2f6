#include "glace/encoder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "glace/digest.hpp"
#include "glace/errors.hpp"
#include "glace/rng.hpp"

namespace glace {

namespace {

void fill_glorot(std::vector<double>& w, int fan_in, int fan_out, Rng& rng) {
  const double r = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& x : w) x = rng.uniform(-r, r);
}

void check_input(const EncoderParams& p, const SparseRow& x) {
  for (const auto& [col, val] : x.nz) {
    if (col < 0 || col >= p.input_dim)
      throw ValidationError("attribute index " + std::to_string(col) +
                            " outside encoder input dimension " +
                            std::to_string(p.input_dim));
    (void)val;
  }
}

// Hidden layer into cache.u (and cache.u_pre when relu is on).
void forward_hidden(const EncoderParams& p, const SparseRow& x,
                    bool hidden_relu, EncodeCache& cache) {
  const int m = p.hidden_dim;
  cache.u.assign(p.b.begin(), p.b.end());
  double* u = cache.u.data();
  for (const auto& [col, val] : x.nz) {
    const double* wrow = &p.W[static_cast<std::size_t>(col) * m];
    for (int k = 0; k < m; ++k) u[k] += val * wrow[k];
  }
  if (hidden_relu) {
    cache.u_pre = cache.u;
    for (int k = 0; k < m; ++k) u[k] = u[k] > 0.0 ? u[k] : 0.0;
  } else {
    cache.u_pre.clear();
  }
}

void forward_mu(const EncoderParams& p, const EncodeCache& cache,
                std::vector<double>& mu) {
  const int m = p.hidden_dim, L = p.embed_dim;
  mu.assign(p.b_mu.begin(), p.b_mu.end());
  double* out = mu.data();
  const double* u = cache.u.data();
  for (int k = 0; k < m; ++k) {
    const double uk = u[k];
    const double* row = &p.W_mu[static_cast<std::size_t>(k) * L];
    for (int l = 0; l < L; ++l) out[l] += uk * row[l];
  }
}

}  // namespace

EncoderParams init_params(int input_dim, int hidden_dim, int embed_dim,
                          std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1 || embed_dim < 1)
    throw ValidationError("encoder dimensions must be >= 1");
  EncoderParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.embed_dim = embed_dim;
  p.W.resize(static_cast<std::size_t>(input_dim) * hidden_dim);
  p.b.assign(hidden_dim, 0.0);
  p.W_mu.resize(static_cast<std::size_t>(hidden_dim) * embed_dim);
  p.b_mu.assign(embed_dim, 0.0);
  p.W_sigma.resize(static_cast<std::size_t>(hidden_dim) * embed_dim);
  p.b_sigma.assign(embed_dim, 0.0);
  Rng rng(seed);
  fill_glorot(p.W, input_dim, hidden_dim, rng);
  fill_glorot(p.W_mu, hidden_dim, embed_dim, rng);
  fill_glorot(p.W_sigma, hidden_dim, embed_dim, rng);
  return p;
}

void EncoderGrads::resize_like(const EncoderParams& p) {
  W.assign(p.W.size(), 0.0);
  b.assign(p.b.size(), 0.0);
  W_mu.assign(p.W_mu.size(), 0.0);
  b_mu.assign(p.b_mu.size(), 0.0);
  W_sigma.assign(p.W_sigma.size(), 0.0);
  b_sigma.assign(p.b_sigma.size(), 0.0);
}

void EncoderGrads::zero() {
  std::fill(W.begin(), W.end(), 0.0);
  std::fill(b.begin(), b.end(), 0.0);
  std::fill(W_mu.begin(), W_mu.end(), 0.0);
  std::fill(b_mu.begin(), b_mu.end(), 0.0);
  std::fill(W_sigma.begin(), W_sigma.end(), 0.0);
  std::fill(b_sigma.begin(), b_sigma.end(), 0.0);
}

void EncoderGrads::add(const EncoderGrads& other) {
  auto axpy = [](std::vector<double>& dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  };
  axpy(W, other.W);
  axpy(b, other.b);
  axpy(W_mu, other.W_mu);
  axpy(b_mu, other.b_mu);
  axpy(W_sigma, other.W_sigma);
  axpy(b_sigma, other.b_sigma);
}

void encode_into(const EncoderParams& p, const SparseRow& x, bool hidden_relu,
                 GaussianEmbedding& out, EncodeCache& cache) {
  check_input(p, x);
  forward_hidden(p, x, hidden_relu, cache);
  forward_mu(p, cache, out.mu);

  const int m = p.hidden_dim, L = p.embed_dim;
  cache.sigma_pre.assign(p.b_sigma.begin(), p.b_sigma.end());
  double* sp = cache.sigma_pre.data();
  const double* u = cache.u.data();
  for (int k = 0; k < m; ++k) {
    const double uk = u[k];
    const double* row = &p.W_sigma[static_cast<std::size_t>(k) * L];
    for (int l = 0; l < L; ++l) sp[l] += uk * row[l];
  }
  out.sigma.resize(L);
  for (int l = 0; l < L; ++l) {
    // ELU(t) + 1: positive in exact arithmetic, clamped against underflow.
    const double t = sp[l];
    const double s = t >= 0.0 ? t + 1.0 : std::exp(t);
    out.sigma[l] = s > kSigmaClamp ? s : kSigmaClamp;
  }
}

GaussianEmbedding encode(const EncoderParams& p, const SparseRow& x,
                         bool hidden_relu, EncodeCache* cache) {
  GaussianEmbedding out;
  EncodeCache local;
  encode_into(p, x, hidden_relu, out, cache ? *cache : local);
  return out;
}

std::vector<double> encode_point(const EncoderParams& p, const SparseRow& x,
                                 bool hidden_relu, EncodeCache* cache) {
  check_input(p, x);
  EncodeCache local;
  EncodeCache& c = cache ? *cache : local;
  forward_hidden(p, x, hidden_relu, c);
  c.sigma_pre.clear();
  std::vector<double> mu;
  forward_mu(p, c, mu);
  return mu;
}

void encode_backward(const EncoderParams& p, const SparseRow& x,
                     const EncodeCache& cache, std::span<const double> grad_mu,
                     std::span<const double> grad_sigma, bool hidden_relu,
                     EncoderGrads& out, std::vector<double>* grad_x) {
  const int m = p.hidden_dim, L = p.embed_dim;
  if (static_cast<int>(grad_mu.size()) != L)
    throw ValidationError("grad_mu size does not match embedding dimension");
  const bool with_sigma = !grad_sigma.empty();
  if (with_sigma && static_cast<int>(grad_sigma.size()) != L)
    throw ValidationError("grad_sigma size does not match embedding dimension");
  if (with_sigma && cache.sigma_pre.empty())
    throw ValidationError("sigma gradient given but forward pass was point-mode");
  if (out.W.size() != p.W.size()) out.resize_like(p);

  // Through the ELU(.)+1 shift: derivative 1 for t >= 0, e^t below.
  std::vector<double> gspre;
  if (with_sigma) {
    gspre.resize(L);
    for (int l = 0; l < L; ++l) {
      const double t = cache.sigma_pre[l];
      gspre[l] = grad_sigma[l] * (t >= 0.0 ? 1.0 : std::exp(t));
      out.b_sigma[l] += gspre[l];
    }
  }
  for (int l = 0; l < L; ++l) out.b_mu[l] += grad_mu[l];

  std::vector<double> gu(m);
  const double* u = cache.u.data();
  for (int k = 0; k < m; ++k) {
    const double uk = u[k];
    const std::size_t off = static_cast<std::size_t>(k) * L;
    double acc = 0.0;
    double* gWm = &out.W_mu[off];
    const double* Wm = &p.W_mu[off];
    for (int l = 0; l < L; ++l) {
      gWm[l] += uk * grad_mu[l];
      acc += Wm[l] * grad_mu[l];
    }
    if (with_sigma) {
      double* gWs = &out.W_sigma[off];
      const double* Ws = &p.W_sigma[off];
      for (int l = 0; l < L; ++l) {
        gWs[l] += uk * gspre[l];
        acc += Ws[l] * gspre[l];
      }
    }
    gu[k] = acc;
  }

  if (hidden_relu) {
    if (cache.u_pre.empty())
      throw ValidationError("relu backward needs the pre-activation cache");
    for (int k = 0; k < m; ++k)
      if (cache.u_pre[k] <= 0.0) gu[k] = 0.0;
  }

  for (int k = 0; k < m; ++k) out.b[k] += gu[k];
  for (const auto& [col, val] : x.nz) {
    double* gW = &out.W[static_cast<std::size_t>(col) * m];
    for (int k = 0; k < m; ++k) gW[k] += val * gu[k];
  }

  if (grad_x) {
    grad_x->assign(p.input_dim, 0.0);
    for (int d = 0; d < p.input_dim; ++d) {
      const double* wrow = &p.W[static_cast<std::size_t>(d) * m];
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += wrow[k] * gu[k];
      (*grad_x)[d] = acc;
    }
  }
}

namespace {

constexpr char kMagic[8] = {'G', 'L', 'A', 'C', 'E', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& buf, const T& v) {
  const char* p = reinterpret_cast<const char*>(&v);
  buf.append(p, sizeof(T));
}

void put_tensor(std::string& buf, const std::vector<double>& t) {
  buf.append(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(double));
}

void put_encoder(std::string& buf, const EncoderParams& e) {
  put_tensor(buf, e.W);
  put_tensor(buf, e.b);
  put_tensor(buf, e.W_mu);
  put_tensor(buf, e.b_mu);
  put_tensor(buf, e.W_sigma);
  put_tensor(buf, e.b_sigma);
}

class Reader {
 public:
  Reader(const std::string& buf, std::size_t pos) : buf_(buf), pos_(pos) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > buf_.size())
      throw ValidationError("checkpoint truncated");
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  void get_tensor(std::vector<double>& t, std::size_t count) {
    if (pos_ + count * sizeof(double) > buf_.size())
      throw ValidationError("checkpoint truncated");
    t.resize(count);
    std::memcpy(t.data(), buf_.data() + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::string& buf_;
  std::size_t pos_;
};

void get_encoder(Reader& r, EncoderParams& e) {
  const auto D = static_cast<std::size_t>(e.input_dim);
  const auto m = static_cast<std::size_t>(e.hidden_dim);
  const auto L = static_cast<std::size_t>(e.embed_dim);
  r.get_tensor(e.W, D * m);
  r.get_tensor(e.b, m);
  r.get_tensor(e.W_mu, m * L);
  r.get_tensor(e.b_mu, L);
  r.get_tensor(e.W_sigma, m * L);
  r.get_tensor(e.b_sigma, L);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& m) {
  if (m.context.has_value() != (m.mode == ProximityMode::Second))
    throw ValidationError("context encoder must be present iff second-order");

  std::string buf(kMagic, sizeof kMagic);
  put(buf, kVersion);
  put(buf, static_cast<std::uint8_t>(m.mode));
  put(buf, static_cast<std::uint8_t>(m.kind));
  put(buf, static_cast<std::uint8_t>(m.symmetric ? 1 : 0));
  put(buf, static_cast<std::uint8_t>(m.hidden_relu ? 1 : 0));
  put(buf, m.seed);
  put(buf, static_cast<std::uint32_t>(m.main.input_dim));
  put(buf, static_cast<std::uint32_t>(m.main.hidden_dim));
  put(buf, static_cast<std::uint32_t>(m.main.embed_dim));
  put(buf, static_cast<std::uint8_t>(m.context ? 1 : 0));
  put_encoder(buf, m.main);
  if (m.context) put_encoder(buf, *m.context);

  const std::uint64_t digest = fnv1a64(
      {reinterpret_cast<const unsigned char*>(buf.data()) + sizeof kMagic,
       buf.size() - sizeof kMagic});
  put(buf, digest);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ValidationError("short write on checkpoint: " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint: " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < sizeof kMagic + sizeof(std::uint64_t) ||
      std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0)
    throw ValidationError("not a glace checkpoint: " + path.string());

  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - sizeof stored, sizeof stored);
  const std::uint64_t actual = fnv1a64(
      {reinterpret_cast<const unsigned char*>(buf.data()) + sizeof kMagic,
       buf.size() - sizeof kMagic - sizeof stored});
  if (stored != actual)
    throw ValidationError("checkpoint digest mismatch (corrupt file): " +
                          path.string());

  Reader r(buf, sizeof kMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion)
    throw ValidationError("unsupported checkpoint version " +
                          std::to_string(version));
  ModelParams m;
  m.mode = static_cast<ProximityMode>(r.get<std::uint8_t>());
  m.kind = static_cast<ModelKind>(r.get<std::uint8_t>());
  m.symmetric = r.get<std::uint8_t>() != 0;
  m.hidden_relu = r.get<std::uint8_t>() != 0;
  m.seed = r.get<std::uint64_t>();
  const auto D = r.get<std::uint32_t>();
  const auto hid = r.get<std::uint32_t>();
  const auto L = r.get<std::uint32_t>();
  const bool has_context = r.get<std::uint8_t>() != 0;

  m.main.input_dim = static_cast<int>(D);
  m.main.hidden_dim = static_cast<int>(hid);
  m.main.embed_dim = static_cast<int>(L);
  get_encoder(r, m.main);
  if (has_context) {
    m.context.emplace();
    m.context->input_dim = static_cast<int>(D);
    m.context->hidden_dim = static_cast<int>(hid);
    m.context->embed_dim = static_cast<int>(L);
    get_encoder(r, *m.context);
  }
  return m;
}

}  // namespace glace
