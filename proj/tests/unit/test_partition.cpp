#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sgtree/partition.hpp"
#include "test_support.hpp"

using namespace sgtree;

namespace {

ZTableOptions exact(std::size_t upto) {
  ZTableOptions o;
  o.exact_upto = upto;
  return o;
}

double lin(LogNonNeg v) { return v.linear(); }

}  // namespace

TEST_CASE("boundary rows of the Z-table") {
  const auto ws = WeightSequence::custom({Rational(3), Rational(1), Rational(2)});
  const auto t = ZTable::build(ws, 20, exact(10));
  CHECK(t.log_z(0, 0).log() == 0.0);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(t.log_z(0, n).is_zero());
  for (std::size_t N = 0; N <= 20; ++N) CHECK(t.log_z(N, 0).log() == doctest::Approx(N * std::log(3.0)).epsilon(1e-14));
  for (std::size_t N = 0; N <= 10; ++N) CHECK(*t.exact_z(N, 0) == boost::multiprecision::pow(BigInt(3), N));
}

TEST_CASE("Z(N,n) examples") {
  SUBCASE("uniform: stars and bars") {
    const auto t = ZTable::build(WeightSequence::uniform(), 10, exact(6));
    CHECK(*t.exact_z(3, 2) == 6);
    CHECK(lin(t.log_z(3, 2)) == doctest::Approx(6.0).epsilon(1e-14));
  }
  SUBCASE("Z(1,n) = w_{n+1}") {
    const auto ws = WeightSequence::factorial_alpha(0.5);
    const auto t = ZTable::build(ws, 30);
    for (std::size_t n = 0; n <= 30; ++n)
      CHECK(t.log_z(1, n).log() == doctest::Approx(ws.log_weight(n + 1).log()).epsilon(1e-15));
  }
  SUBCASE("theorem2: Z(3,2) = 6 + 3 lambda^2") {
    for (double lambda : {1.0, 2.0, 0.5}) {
      const auto t = ZTable::build(WeightSequence::theorem2(lambda), 6, exact(6));
      CHECK(*t.exact_z(3, 2) == rational_from_double(6.0 + 3.0 * lambda * lambda));
      CHECK(lin(t.log_z(3, 2)) == doctest::Approx(6.0 + 3.0 * lambda * lambda).epsilon(1e-14));
    }
  }
}

TEST_CASE("exact mirror matches composition enumeration") {
  const std::vector<WeightSequence> families = {
      WeightSequence::uniform(), WeightSequence::theorem2(2.0), WeightSequence::theorem2(1.0),
      WeightSequence::custom({Rational(1), Rational(1, 2), Rational(0), Rational(3)})};
  for (const auto& ws : families) {
    const auto t = ZTable::build(ws, 12, exact(12));
    for (std::size_t N = 0; N <= 12; ++N) {
      for (std::size_t n = 0; n + N <= 16 && n <= 12; ++n) {
        const auto oracle = testing::brute_force_z(ws, N, n);
        REQUIRE(*t.exact_z(N, n) == oracle);
        if (oracle > 0) REQUIRE(relative_gap(t.log_z(N, n).log(), log_of(oracle)) < 1e-12);
      }
    }
  }
}

TEST_CASE("stored entries satisfy the recurrence") {
  const auto ws = WeightSequence::factorial_alpha(0.5);
  const auto t = ZTable::build(ws, 400);
  RandomSource rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t N = 1 + rng() % 400;
    const std::size_t n = rng() % 401;
    LogNonNeg acc = LogNonNeg::zero();
    for (std::size_t d = 0; d <= n; ++d) acc += ws.log_weight(d + 1) * t.log_z(N - 1, n - d);
    REQUIRE(relative_gap(acc.log(), t.log_z(N, n).log()) < 1e-12);
  }
}

TEST_CASE("build results do not depend on the worker count") {
  ZTableOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto ws = WeightSequence::factorial_alpha(0.6);
  const auto a = ZTable::build(ws, 150, one);
  const auto b = ZTable::build(ws, 150, four);
  for (std::size_t N = 0; N <= 150; ++N)
    for (std::size_t n = 0; n <= 150; ++n) REQUIRE(a.log_z(N, n) == b.log_z(N, n));
}

TEST_CASE("truncated convolution stays within its error bound") {
  ZTableOptions trunc;
  trunc.truncate = true;
  const auto ws = WeightSequence::factorial_alpha(0.5);
  const auto full = ZTable::build(ws, 300);
  const auto cut = ZTable::build(ws, 300, trunc);
  CHECK(cut.truncated());
  double worst = 0.0;
  for (std::size_t N = 1; N <= 300; ++N)
    for (std::size_t n = 0; n <= 300; ++n) worst = std::max(worst, relative_gap(cut.log_z(N, n).log(), full.log_z(N, n).log()));
  CHECK(worst < 1e-12);
}

TEST_CASE("z_n and forest_z") {
  const auto u = ZTable::build(WeightSequence::uniform(), 10, exact(10));
  const auto t2 = ZTable::build(WeightSequence::theorem2(1.0), 10, exact(10));
  const auto fa = ZTable::build(WeightSequence::factorial_alpha(0.5), 10);
  CHECK(z_n(fa, 1).log() == 0.0);                      // Z_1 = w_1
  CHECK(*exact_z_n(u, 3) == 2);                         // path and star
  CHECK(lin(z_n(u, 3)) == doctest::Approx(2.0));
  CHECK(*exact_z_n(t2, 3) == 3);                        // star 2 + path 1
  for (std::size_t N = 1; N <= 10; ++N) CHECK(forest_z(fa, N, 1) == z_n(fa, N));
  CHECK(lin(forest_z(u, 2, 2)) == doctest::Approx(1.0));
  CHECK(lin(forest_z(u, 3, 2)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(z_n(u, 0), std::out_of_range);
  CHECK_THROWS_AS(z_n(u, 11), std::out_of_range);
  CHECK_THROWS_AS(forest_z(u, 3, 4), std::out_of_range);
  CHECK_THROWS_AS(forest_z(u, 3, 0), std::out_of_range);
}

TEST_CASE("root degree law") {
  const auto u = ZTable::build(WeightSequence::uniform(), 10, exact(10));
  const auto t1 = ZTable::build(WeightSequence::theorem2(1.0), 10, exact(10));
  auto p = root_degree_pmf(u, 3);
  CHECK(p.p[1] == doctest::Approx(0.5));
  CHECK(p.p[2] == doctest::Approx(0.5));
  p = root_degree_pmf(t1, 3);
  CHECK(p.p[2] == doctest::Approx(2.0 / 3.0));
  CHECK(p.p[1] == doctest::Approx(1.0 / 3.0));
  CHECK(exact_root_degree_pmf(t1, 3)[2] == Rational(2, 3));
  for (const auto* t : {&u, &t1}) {
    const auto two = root_degree_pmf(*t, 2);
    CHECK(two.p[1] == 1.0);
  }
  CHECK_THROWS_AS(root_degree_pmf(u, 1), std::invalid_argument);

  // Normalization closes analytically; check the raw closed-form mass.
  const auto fa = ZTable::build(WeightSequence::factorial_alpha(0.5), 300);
  for (std::size_t N = 2; N <= 300; ++N) REQUIRE(std::abs(root_degree_pmf(fa, N).raw_mass - 1.0) < 1e-10);
  const auto t2 = ZTable::build(WeightSequence::theorem2(2.0), 12, exact(12));
  for (std::size_t N = 2; N <= 12; ++N) {
    Rational total = 0;
    for (const auto& v : exact_root_degree_pmf(t2, N)) total += v;
    REQUIRE(total == 1);
  }
}

TEST_CASE("joint law of sigma(s) and sigma(s_1)") {
  const auto u = ZTable::build(WeightSequence::uniform(), 10, exact(10));
  const auto t1 = ZTable::build(WeightSequence::theorem2(1.0), 10, exact(10));
  CHECK(joint_s_s1_pmf(u, 3)[1][1] == doctest::Approx(0.5));
  CHECK(exact_joint_s_s1_pmf(u, 3)[1][1] == Rational(1, 2));
  CHECK(exact_joint_s_s1_pmf(t1, 3)[2][0] == Rational(2, 3));
  CHECK_THROWS_AS(joint_s_s1_pmf(u, 2), std::invalid_argument);

  for (const auto* t : {&u, &t1}) {
    for (std::size_t N = 3; N <= 10; ++N) {
      const auto q = exact_joint_s_s1_pmf(*t, N);
      const auto marg = exact_root_degree_pmf(*t, N);
      for (std::size_t k = 1; k < N; ++k) {
        Rational row = 0;
        for (std::size_t l = 0; l < N; ++l) {
          row += q[k][l];
          if (l >= 1 && k < N && l < N) REQUIRE(q[k][l] == q[l][k]);
        }
        REQUIRE(row == marg[k]);
      }
    }
  }
  const auto fa = ZTable::build(WeightSequence::factorial_alpha(0.5), 60);
  for (std::size_t N : {3, 10, 60}) {
    const auto q = joint_s_s1_pmf(fa, N);
    const auto marg = root_degree_pmf(fa, N);
    for (std::size_t k = 1; k < N; ++k) {
      double row = 0.0;
      for (std::size_t l = 0; l < N; ++l) row += q[k][l];
      REQUIRE(row == doctest::Approx(marg.p[k]).epsilon(1e-10));
      for (std::size_t l = 1; l < N; ++l) REQUIRE(q[k][l] == doctest::Approx(q[l][k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("summation identity") {
  const auto u = ZTable::build(WeightSequence::uniform(), 12, exact(12));
  // N = 3, n = 2: 1*Z(2,1) + 2*Z(2,0) = 4 = (2/3) * 6
  CHECK(check_lemma_lsum(u, 3, 2) < 1e-14);
  CHECK(check_lemma_lsum_exact(u, 3, 2) == 0);
  CHECK(check_lemma_lsum(u, 5, 0) == 0.0);
  const auto fa = ZTable::build(WeightSequence::factorial_alpha(0.5), 40);
  for (std::size_t k = 0; k <= 40; ++k) CHECK(check_lemma_lsum(fa, 1, k) < 1e-14);
  for (std::size_t N = 1; N <= 12; ++N)
    for (std::size_t n = 0; n <= 12; ++n) REQUIRE(check_lemma_lsum_exact(u, N, n) == 0);
}

TEST_CASE("inequality Z(N,n) <= eps Z(N,n+1) + C^N") {
  const auto fa = ZTable::build(WeightSequence::factorial_alpha(0.5), 51);
  const auto first = check_lemma_l1(fa, 0.5, 1, 0);
  CHECK(first.a_eps == 5);  // i^{-1/2} < 1/2 first holds at i = 5
  CHECK(first.log_c_eps == doctest::Approx(std::log(1.0 + 1.0 + std::sqrt(2.0) + std::sqrt(6.0) + std::sqrt(24.0) +
                                                    std::sqrt(120.0))));
  for (std::size_t N = 1; N <= 50; ++N)
    for (std::size_t n = 0; n <= 50; ++n) REQUIRE(check_lemma_l1(fa, 0.5, N, n).verdict == L1Verdict::holds);
  CHECK(check_lemma_l1(fa, 0.5, 10, 51).verdict == L1Verdict::not_applicable);
  const auto u = ZTable::build(WeightSequence::uniform(), 20);
  CHECK_THROWS_AS(check_lemma_l1(u, 0.5, 3, 2), std::runtime_error);
}

TEST_CASE("resource limits and range errors") {
  CHECK_THROWS_AS(ZTable::build(WeightSequence::uniform(), 1501), ResourceLimitError);
  CHECK_THROWS_AS(ZTable::build(WeightSequence::uniform(), 0), std::invalid_argument);
  const auto t = ZTable::build(WeightSequence::uniform(), 5);
  CHECK_THROWS_AS(t.log_z(6, 0), std::out_of_range);
  CHECK_FALSE(t.exact_z(1, 1).has_value());
  CHECK_THROWS_AS(ZTable::build(WeightSequence::factorial_alpha(0.5), 5, exact(3)), std::invalid_argument);
}

TEST_CASE("binary container round-trips") {
  const auto t = ZTable::build(WeightSequence::factorial_alpha(0.5), 30);
  std::stringstream buf;
  t.save(buf);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "SGTZ");
  CHECK(static_cast<int>(bytes[4]) == kZTableFormatVersion);
  const auto back = ZTable::load(buf);
  CHECK(back.n_max() == 30);
  CHECK(back.weights().to_json() == t.weights().to_json());
  for (std::size_t N = 0; N <= 30; ++N)
    for (std::size_t n = 0; n <= 30; ++n) REQUIRE(back.log_z(N, n) == t.log_z(N, n));
  std::stringstream bad("SGTX");
  CHECK_THROWS(ZTable::load(bad));
}
