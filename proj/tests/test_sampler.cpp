#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "glace/errors.hpp"
#include "glace/graph.hpp"
#include "glace/rng.hpp"
#include "glace/sampler.hpp"
#include "support/oracles.hpp"

using namespace glace;

TEST_SUITE_BEGIN("sampler");

TEST_CASE("derived sub-seeds differ by label and base") {
  CHECK(derive_seed(1, "split") != derive_seed(1, "init-main"));
  CHECK(derive_seed(1, "split") != derive_seed(2, "split"));
  CHECK(derive_seed(1, "batch:1") != derive_seed(1, "batch:2"));
  CHECK(derive_seed(42, "split") == derive_seed(42, "split"));
}

TEST_CASE("rng draws are reproducible and in range") {
  Rng a(9), b(9);
  for (int k = 0; k < 1000; ++k) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng r(5);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.uniform_below(7) < 7);
  }
}

TEST_CASE("uniform weights give equal table mass") {
  const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
  const auto t = AliasTable::build(w);
  for (double m : t.masses()) CHECK(m == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("weights [3,1] put mass 0.75 on index 0") {
  const std::vector<double> w{3.0, 1.0};
  const auto masses = AliasTable::build(w).masses();
  CHECK(masses[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(masses[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("invalid weight vectors are rejected") {
  const std::vector<double> zeros{0.0, 0.0};
  CHECK_THROWS_AS(AliasTable::build(zeros), ValidationError);
  const std::vector<double> negative{1.0, -0.5};
  CHECK_THROWS_AS(AliasTable::build(negative), ValidationError);
  CHECK_THROWS_AS(AliasTable::build(std::vector<double>{}), ValidationError);
}

TEST_CASE("reconstruction invariant holds for random weight vectors") {
  Rng rng(1234);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = rep < 10 ? 2 + static_cast<int>(rng.uniform_below(200))
                           : 100000;  // two large instances
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
      x = rng.uniform01() < 0.05 ? 0.0 : rng.uniform(0.01, 10.0);
      sum += x;
    }
    if (sum == 0.0) w[0] = sum = 1.0;
    const auto masses = AliasTable::build(w).masses();
    for (int i = 0; i < n; ++i)
      CHECK(std::fabs(masses[i] - w[i] / sum) < 1e-12);
  }
}

TEST_CASE("single-outcome table always draws index 0") {
  const std::vector<double> w{2.5};
  const auto t = AliasTable::build(w);
  Rng rng(3);
  for (int k = 0; k < 100; ++k) CHECK(t.draw(rng) == 0);
}

TEST_CASE("fixed seed reproduces the draw sequence") {
  const std::vector<double> w{0.3, 0.2, 0.5};
  const auto t = AliasTable::build(w);
  Rng a(77), b(77);
  for (int k = 0; k < 500; ++k) CHECK(t.draw(a) == t.draw(b));
}

TEST_CASE("uniform 4-way table: 1e5 draws stay within 1% of 0.25") {
  const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
  const auto t = AliasTable::build(w);
  Rng rng(2024);
  std::vector<int> counts(4, 0);
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++counts[t.draw(rng)];
  for (int c : counts)
    CHECK(std::fabs(c / static_cast<double>(draws) - 0.25) < 0.01);
}

TEST_CASE("empirical frequencies match [0.2, 0.3, 0.5] within 3 sigma") {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto t = AliasTable::build(w);
  Rng rng(99);
  const int draws = 1000000;
  std::vector<int> counts(3, 0);
  for (int k = 0; k < draws; ++k) ++counts[t.draw(rng)];
  for (int i = 0; i < 3; ++i) {
    const double exp = w[i] * draws;
    const double sigma = std::sqrt(draws * w[i] * (1.0 - w[i]));
    CHECK(std::fabs(counts[i] - exp) < 3.0 * sigma);
  }
}

TEST_CASE("chi-square goodness of fit over random tables (1e6 draws)") {
  Rng meta(5150);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(meta.uniform_below(60));
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
      x = meta.uniform(0.05, 5.0);
      sum += x;
    }
    const auto t = AliasTable::build(w);
    Rng rng(derive_seed(4242, "chi:" + std::to_string(rep)));
    const int draws = 1000000;
    std::vector<int> counts(n, 0);
    for (int k = 0; k < draws; ++k) ++counts[t.draw(rng)];
    double stat = 0.0;
    for (int i = 0; i < n; ++i) {
      const double expct = w[i] / sum * draws;
      stat += (counts[i] - expct) * (counts[i] - expct) / expct;
    }
    const double p = oracle::chi2_pvalue(stat, n - 1);
    CHECK(p > 0.001);
  }
}

namespace {

AttributedGraph degree_graph() {
  // out-degrees (weighted): node0 = 1, node1 = 16, node2 = 0
  std::vector<Edge> edges{{0, 2, 1.0}, {1, 2, 16.0}};
  std::vector<SparseRow> attrs(3);
  return AttributedGraph(3, std::move(edges), /*directed=*/true,
                         std::move(attrs), 1, {});
}

}  // namespace

TEST_CASE("noise distribution: degrees [1,16] give odds exactly 1:8") {
  const auto table = noise_distribution(degree_graph());
  const auto masses = table.masses();
  CHECK(masses[1] / masses[0] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(masses[0] + masses[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noise distribution: zero-degree nodes are never drawn") {
  const auto table = noise_distribution(degree_graph());
  CHECK(table.masses()[2] == 0.0);
  Rng rng(8);
  for (int k = 0; k < 10000; ++k) CHECK(table.draw(rng) != 2);
}

TEST_CASE("noise distribution: equal degrees are uniform over active nodes") {
  std::vector<Edge> edges{{0, 1, 2.0}, {1, 2, 2.0}, {2, 0, 2.0}};
  std::vector<SparseRow> attrs(3);
  const AttributedGraph g(3, std::move(edges), true, std::move(attrs), 1, {});
  const auto masses = noise_distribution(g).masses();
  for (double m : masses) CHECK(m == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_SUITE_END();
