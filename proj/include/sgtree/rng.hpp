#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace sgtree {

/// Philox4x32-10 counter-based generator keyed by (seed, stream id).
///
/// Block b of stream s is Philox(key = seed, counter = (b, s)), so identical
/// (seed, stream) pairs reproduce identical draws on every platform and
/// streams can be handed to workers without coordination.
class RandomSource {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kAlgorithm = "philox4x32-10";

  RandomSource(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// A fresh independent stream derived from this one's seed.
  RandomSource split(std::uint64_t stream) const { return {seed_, stream}; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
};

}  // namespace sgtree
