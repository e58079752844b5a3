#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgtree/exact.hpp"
#include "sgtree/logmath.hpp"

namespace sgtree {

enum class WeightFamily { uniform, theorem2, factorial_alpha, custom };

std::string to_string(WeightFamily family);

/// Branching weights w_n for n >= 1, where n is the vertex degree.
///
/// Families:
///   uniform            w_n = 1
///   theorem2(lambda)   w_2 = lambda, w_n = (n-1)! otherwise
///   factorial_alpha(a) w_n = ((n-1)!)^a
///   custom(table)      w_n = table[n-1], zero past the end of the table
///
/// Immutable after construction. Every sequence satisfies w_1 > 0 and
/// w_n > 0 for some n > 2; constructors throw std::invalid_argument otherwise.
class WeightSequence {
 public:
  static WeightSequence uniform();
  static WeightSequence theorem2(double lambda);
  static WeightSequence factorial_alpha(double alpha);
  static WeightSequence custom(std::vector<Rational> table);

  /// Accepts {"family":"factorial_alpha","alpha":0.5}, {"family":"theorem2","lambda":2},
  /// {"family":"uniform"} and {"family":"custom","weights":["1","0","2"]}.
  static WeightSequence from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  WeightFamily family() const { return family_; }
  double lambda() const { return param_; }
  double alpha() const { return param_; }

  /// log w_n. Throws std::domain_error for n == 0.
  LogNonNeg log_weight(std::size_t n) const;

  /// Exact w_n when the family has rational weights (uniform, theorem2, custom,
  /// factorial_alpha with integer alpha); std::nullopt otherwise.
  std::optional<Rational> exact_weight(std::size_t n) const;
  bool has_exact() const;

  /// w_n in ~50-digit floating point; defined for every family.
  HighPrecision high_precision_weight(std::size_t n) const;

  /// Largest n with w_n > 0, or nullopt when the support is unbounded.
  std::optional<std::size_t> support_end() const;

 private:
  WeightSequence(WeightFamily family, double param, std::vector<Rational> table);

  WeightFamily family_;
  double param_;
  Rational exact_param_;
  std::vector<Rational> table_;
  std::vector<double> table_logs_;
};

struct SuperexponentialReport {
  /// log(w_{n+1}/w_n) for n = 1..n_max; +-inf where a weight vanishes.
  std::vector<double> log_ratios;
  bool eventually_increasing = false;
  bool exceeds_threshold = false;
  std::optional<std::string> warning;
};

/// Advisory look at the ratio sequence w_{n+1}/w_n; the growth condition is a
/// limit, so this never fails. "Eventually increasing" is judged on the upper
/// half of the range, the threshold on the last ratio.
SuperexponentialReport check_superexponential(const WeightSequence& ws, std::size_t n_max,
                                              double threshold = 2.0);

}  // namespace sgtree
