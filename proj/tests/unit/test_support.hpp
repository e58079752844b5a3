#pragma once

// Test-only oracles, independent of the library's DP and sampler.

#include <cstdint>
#include <functional>
#include <vector>

#include "sgtree/exact.hpp"
#include "sgtree/rng.hpp"
#include "sgtree/trees.hpp"
#include "sgtree/weights.hpp"

namespace sgtree::testing {

// Visits every composition (d_1..d_N) of n into N nonnegative parts.
inline void for_each_composition(std::size_t N, std::size_t n,
                                 const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> d(N, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == N) {
      d[pos] = static_cast<std::uint32_t>(left);
      fn(d);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      d[pos] = static_cast<std::uint32_t>(v);
      rec(pos + 1, left - v);
    }
  };
  if (N == 0) {
    if (n == 0) fn(d);
    return;
  }
  rec(0, n);
}

// Z(N, n) by summing over all compositions.
inline Rational brute_force_z(const WeightSequence& ws, std::size_t N, std::size_t n) {
  std::vector<Rational> w(n + 1);
  for (std::size_t k = 0; k <= n; ++k) w[k] = *ws.exact_weight(k + 1);
  Rational total = 0;
  for_each_composition(N, n, [&](const std::vector<std::uint32_t>& d) {
    Rational p = 1;
    for (auto x : d) p *= w[x];
    total += p;
  });
  return total;
}

// Random Lukasiewicz word with N letters: a random composition of
// N-1 into N parts, rotated by brute-force validity search.
inline PlaneTree random_tree(std::size_t N, RandomSource& rng) {
  std::vector<std::uint32_t> d(N, 0);
  for (std::size_t k = 0; k + 1 < N; ++k) ++d[rng() % N];
  for (std::size_t r = 0; r < N; ++r) {
    std::vector<std::uint32_t> rot(N);
    for (std::size_t i = 0; i < N; ++i) rot[i] = d[(r + i) % N];
    if (PlaneTree::is_lukasiewicz(rot)) return PlaneTree::from_word(rot);
  }
  throw std::logic_error("no valid rotation");
}

}  // namespace sgtree::testing
