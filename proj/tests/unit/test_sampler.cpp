#include <doctest.h>

#include <cmath>
#include <map>

#include "sgtree/oracle.hpp"
#include "sgtree/partition.hpp"
#include "sgtree/sampler.hpp"
#include "sgtree/stats.hpp"

using namespace sgtree;

TEST_CASE("Philox known answer and determinism") {
  RandomSource zero(0, 0);
  CHECK(zero() == 0xe169c58d6627e8d5ULL);
  RandomSource a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    REQUIRE(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
  RandomSource u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("composition sampling") {
  SUBCASE("N = 1") {
    const auto t = ZTable::build(WeightSequence::factorial_alpha(0.5), 10);
    RandomSource rng(1);
    for (std::size_t n = 0; n <= 10; ++n) CHECK(sample_composition(t, 1, n, rng) == std::vector<std::uint32_t>{uint32_t(n)});
  }
  SUBCASE("uniform N = 3, n = 2: each composition 1/6") {
    const auto t = ZTable::build(WeightSequence::uniform(), 5);
    RandomSource rng(2);
    std::map<std::vector<std::uint32_t>, int> freq;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++freq[sample_composition(t, 3, 2, rng)];
    CHECK(freq.size() == 6);
    const double se = std::sqrt((1.0 / 6) * (5.0 / 6) / draws);
    for (const auto& [d, c] : freq) CHECK(std::abs(c / double(draws) - 1.0 / 6) < 4 * se);
  }
  SUBCASE("theorem2(1) N = 3, n = 2") {
    const auto t = ZTable::build(WeightSequence::theorem2(1.0), 5);
    RandomSource rng(3);
    std::map<std::vector<std::uint32_t>, int> freq;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++freq[sample_composition(t, 3, 2, rng)];
    for (const auto& [d, c] : freq) {
      const bool has_two = std::find(d.begin(), d.end(), 2u) != d.end();
      const double p = has_two ? 2.0 / 9 : 1.0 / 9;
      CHECK(std::abs(c / double(draws) - p) < 4 * std::sqrt(p * (1 - p) / draws));
    }
  }
  SUBCASE("zero partition function") {
    const auto t = ZTable::build(WeightSequence::custom({Rational(1), Rational(0), Rational(1)}), 5);
    RandomSource rng(4);
    CHECK_THROWS_AS(sample_composition(t, 1, 1, rng), std::domain_error);
  }
}

TEST_CASE("cycle-lemma rotation") {
  CHECK(rotate_to_tree(std::vector<std::uint32_t>{0, 2, 0}).to_string() == "2 0 0");
  CHECK(rotate_to_tree(std::vector<std::uint32_t>{1, 1, 0}).to_string() == "1 1 0");
  CHECK(rotate_to_tree(std::vector<std::uint32_t>{0, 1, 1}).to_string() == "1 1 0");
  CHECK(rotate_to_tree(std::vector<std::uint32_t>{2, 0, 1, 0}).to_string() == "2 0 1 0");
  CHECK(rotate_to_tree(std::vector<std::uint32_t>{0, 0, 3, 0}).to_string() == "3 0 0 0");
  CHECK_THROWS_AS(rotate_to_tree(std::vector<std::uint32_t>{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("sampled trees follow the enumerated measure") {
  const std::vector<WeightSequence> families = {WeightSequence::uniform(), WeightSequence::theorem2(2.0),
                                                WeightSequence::factorial_alpha(0.5), WeightSequence::factorial_alpha(1.5)};
  for (const auto& ws : families) {
    const auto table = ZTable::build(ws, 7);
    for (std::size_t N = 1; N <= 7; ++N) {
      const auto exact = exact_nu(N, ws);
      const std::size_t draws = 100000;
      std::map<PlaneTree, double> freq;
      sample_many(table, N, draws, 77 + N, 1, [&](std::size_t, const PlaneTree& t) { freq[t] += 1.0 / draws; });
      INFO(ws.to_json().dump(), " N=", N);
      CHECK(tv_distance(freq, exact) < 0.02);
    }
  }
}

TEST_CASE("sigma(s) marginal matches the root degree law") {
  const auto table = ZTable::build(WeightSequence::factorial_alpha(0.5), 40);
  const std::size_t N = 40, draws = 20000;
  const auto pmf = root_degree_pmf(table, N);
  std::vector<double> from_trees(N + 1, 0.0), direct(N + 1, 0.0);
  sample_many(table, N, draws, 5, 1, [&](std::size_t, const PlaneTree& t) { from_trees[t.sigma_s()] += 1; });
  RandomSource rng(6);
  for (std::size_t i = 0; i < draws; ++i) direct[sample_sigma_s(table, N, rng)] += 1;
  for (std::size_t k = 1; k < N; ++k) {
    const double p = pmf.p[k];
    const double se = std::sqrt(p * (1 - p) / draws) + 1.0 / draws;
    INFO("k=", k);
    CHECK(std::abs(from_trees[k + 1] / draws - p) < 3 * se);
    CHECK(std::abs(direct[k + 1] / draws - p) < 3 * se);
  }
}

TEST_CASE("sample_sigma_s examples") {
  const auto u = ZTable::build(WeightSequence::uniform(), 5);
  RandomSource rng(8);
  int twos = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto s = sample_sigma_s(u, 3, rng);
    REQUIRE((s == 2 || s == 3));
    twos += s == 2;
    REQUIRE(sample_sigma_s(u, 2, rng) == 2);
  }
  CHECK(std::abs(twos / 20000.0 - 0.5) < 0.015);
  CHECK_THROWS_AS(sample_sigma_s(u, 1, rng), std::invalid_argument);

  // N - sigma(s) is approximately Poisson(lambda)
  const auto t2 = ZTable::build(WeightSequence::theorem2(2.0), 200);
  std::vector<std::size_t> gaps;
  for (int i = 0; i < 20000; ++i) gaps.push_back(200 - sample_sigma_s(t2, 200, rng));
  CHECK(stats::tv_to_pmf(gaps, [](std::size_t k) { return stats::poisson_pmf(k, 2.0); }) < 0.03);
}

TEST_CASE("small-N sample_tree examples") {
  const auto u = ZTable::build(WeightSequence::uniform(), 5);
  const auto t1 = ZTable::build(WeightSequence::theorem2(1.0), 5);
  RandomSource rng(10);
  CHECK(sample_tree(u, 1, rng) == PlaneTree::single_edge());
  int stars_u = 0, stars_t = 0;
  for (int i = 0; i < 30000; ++i) {
    stars_u += sample_tree(u, 3, rng) == PlaneTree::star(3);
    stars_t += sample_tree(t1, 3, rng) == PlaneTree::star(3);
  }
  CHECK(std::abs(stars_u / 30000.0 - 0.5) < 0.012);
  CHECK(std::abs(stars_t / 30000.0 - 2.0 / 3) < 0.012);
}

TEST_CASE("sample_many is independent of the worker count") {
  const auto table = ZTable::build(WeightSequence::factorial_alpha(0.5), 100);
  std::vector<PlaneTree> one(200), many(200);
  sample_many(table, 100, 200, 31, 1, [&](std::size_t i, const PlaneTree& t) { one[i] = t; });
  sample_many(table, 100, 200, 31, 4, [&](std::size_t i, const PlaneTree& t) { many[i] = t; });
  CHECK(one == many);
  for (const auto& t : one) REQUIRE(PlaneTree::is_lukasiewicz(t.word()));
}
