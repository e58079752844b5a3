#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "sgtree/exact.hpp"
#include "sgtree/trees.hpp"
#include "sgtree/weights.hpp"

#include <json.hpp>

namespace sgtree {

inline constexpr std::size_t kEnumerationCap = 12;

/// Every tree with N edges, in lexicographic order of its outdegree word.
/// Throws std::out_of_range for N outside 1..cap.
std::vector<PlaneTree> enumerate_trees(std::size_t N, std::size_t cap = kEnumerationCap);

/// nu_N by brute force. Exact rationals when the weights are rational,
/// otherwise ~50-digit floating point (agreement tolerance 1e-12).
struct EnumeratedMeasure {
  std::size_t N = 0;
  std::vector<PlaneTree> trees;
  bool exact = false;
  std::vector<Rational> exact_weights;  // filled when exact
  Rational exact_total;
  std::vector<HighPrecision> weights;   // always filled
  HighPrecision total;

  /// Probability of trees[i] as a double.
  double probability(std::size_t i) const;
  /// Exact probability of trees[i]; requires exact.
  Rational exact_probability(std::size_t i) const;
};

inline constexpr double kHighPrecisionTolerance = 1e-12;

EnumeratedMeasure exact_nu(std::size_t N, const WeightSequence& ws);

/// Half the l1 distance between an empirical law and nu_N; trees missing from
/// either side count as probability zero.
double tv_distance(const std::map<PlaneTree, double>& empirical, const EnumeratedMeasure& exact);

}  // namespace sgtree

namespace sgtree {

/// Cross-check of the partition module against brute-force enumeration.
struct OracleAgreement {
  std::size_t N = 0;
  bool exact_mode = false;
  /// Exact comparisons (rational weights only).
  bool z_exact_equal = false;
  bool root_degree_exact_equal = false;
  bool joint_exact_equal = false;  // checked for 3 <= N <= 8
  /// Relative gap between DP log Z_N and the enumerated total.
  double z_relative_gap = 0.0;
  /// Largest absolute gap between the root-degree law and the enumerated one.
  double root_degree_max_gap = 0.0;
  double tolerance = 1e-12;

  bool agree() const;
  nlohmann::json to_json() const;
};

OracleAgreement oracle_check(const WeightSequence& ws, std::size_t N);

}  // namespace sgtree
