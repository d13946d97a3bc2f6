#pragma once

#include <span>
#include <vector>

#include "glace/rng.hpp"

namespace glace {

class AttributedGraph;

/// Walker/Vose alias table: O(n) build, O(1) draws from an arbitrary
/// discrete distribution. Immutable after build; safe for concurrent reads.
class AliasTable {
 public:
  AliasTable() = default;

  /// Vose's method. Weights must be nonnegative and finite with at least one
  /// strictly positive entry; index i is then drawn with probability
  /// w_i / sum(w). Throws ValidationError otherwise.
  static AliasTable build(std::span<const double> weights);

  /// One draw costs two uniform variates.
  int draw(Rng& rng) const;

  int size() const { return static_cast<int>(prob_.size()); }
  bool empty() const { return prob_.empty(); }

  /// Reconstructed probability mass per index: the slot's own share plus
  /// inflow from slots aliasing to it. Equals w_i / sum(w) up to fp error;
  /// exposed so validity checks don't need millions of draws.
  std::vector<double> masses() const;

  std::span<const double> prob() const { return prob_; }
  std::span<const int> alias() const { return alias_; }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

/// Negative-sampling noise distribution over all nodes, with unnormalized
/// weight out_degree(v)^(3/4); out_degree is the sum of outgoing arc weights.
/// Zero-degree nodes get zero mass and are never drawn.
AliasTable noise_distribution(const AttributedGraph& g);

}  // namespace glace
