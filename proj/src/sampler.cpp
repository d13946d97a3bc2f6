#include "glace/sampler.hpp"

#include <cmath>
#include <vector>

#include "glace/errors.hpp"
#include "glace/graph.hpp"

namespace glace {

AliasTable AliasTable::build(std::span<const double> weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw ValidationError("alias table needs at least one weight");

  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ValidationError("alias weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0))
    throw ValidationError("alias table needs at least one positive weight");

  AliasTable t;
  t.prob_.assign(n, 1.0);
  t.alias_.resize(n);
  for (int i = 0; i < n; ++i) t.alias_[i] = i;

  // Vose: scale to mean 1, then pair each deficient slot with a surplus one.
  std::vector<double> scaled(n);
  for (int i = 0; i < n; ++i) scaled[i] = weights[i] * n / sum;

  std::vector<int> small, large;
  small.reserve(n);
  large.reserve(n);
  for (int i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(i);

  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    small.pop_back();
    const int g = large.back();
    large.pop_back();
    t.prob_[s] = scaled[s];
    t.alias_[s] = g;
    scaled[g] = (scaled[g] + scaled[s]) - 1.0;
    (scaled[g] < 1.0 ? small : large).push_back(g);
  }
  // Leftovers are 1 up to rounding.
  while (!large.empty()) {
    t.prob_[large.back()] = 1.0;
    large.pop_back();
  }
  while (!small.empty()) {
    t.prob_[small.back()] = 1.0;
    small.pop_back();
  }
  return t;
}

int AliasTable::draw(Rng& rng) const {
  const int k = static_cast<int>(rng.uniform_below(prob_.size()));
  return rng.uniform01() < prob_[k] ? k : alias_[k];
}

std::vector<double> AliasTable::masses() const {
  const int n = size();
  std::vector<double> m(n, 0.0);
  const double slot = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    m[i] += prob_[i] * slot;
    m[alias_[i]] += (1.0 - prob_[i]) * slot;
  }
  return m;
}

AliasTable noise_distribution(const AttributedGraph& g) {
  if (g.num_arcs() == 0)
    throw ValidationError("noise distribution needs a graph with edges");
  std::vector<double> w(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v)
    w[v] = std::pow(g.out_degree(v), 0.75);
  return AliasTable::build(w);
}

}  // namespace glace
