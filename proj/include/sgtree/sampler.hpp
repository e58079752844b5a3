#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sgtree/partition.hpp"
#include "sgtree/rng.hpp"
#include "sgtree/trees.hpp"

namespace sgtree {

/// Draws (d_1, ..., d_N) with sum n, weighted by prod_i w_{d_i+1}.
/// Throws std::domain_error when Z(N, n) = 0.
std::vector<std::uint32_t> sample_composition(const ZTable& table, std::size_t N, std::size_t n, RandomSource& rng);

/// The unique cyclic rotation of d that is a Lukasiewicz word; d must sum to
/// length - 1 (std::invalid_argument otherwise).
PlaneTree rotate_to_tree(std::span<const std::uint32_t> d);

/// Exact draw from nu_N.
PlaneTree sample_tree(const ZTable& table, std::size_t N, RandomSource& rng);

/// Draws sigma(s) without building the tree.
std::uint32_t sample_sigma_s(const ZTable& table, std::size_t N, RandomSource& rng);

/// Index drawn from unnormalized linear weights by inverse CDF.
std::size_t sample_categorical(std::span<const double> weights, RandomSource& rng);

/// Runs fn(i, tree) for i in [0, count), sample i drawn from stream i of the
/// seed. Results are independent of the worker count. fn may be called from
/// several threads at once.
void sample_many(const ZTable& table, std::size_t N, std::size_t count, std::uint64_t seed, unsigned threads,
                 const std::function<void(std::size_t, const PlaneTree&)>& fn);

}  // namespace sgtree
