#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgtree/exact.hpp"
#include "sgtree/logmath.hpp"
#include "sgtree/weights.hpp"

namespace sgtree {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZTableOptions {
  /// Also build an exact rational mirror for N <= exact_upto (0 disables).
  std::size_t exact_upto = 0;
  /// Drop convolution terms more than kTruncationGap below the entry maximum.
  bool truncate = false;
  /// Builds above kDefaultNmaxLimit are refused unless this is set.
  bool allow_large = false;
  /// Worker threads for the per-row fill; 0 picks hardware concurrency.
  unsigned threads = 0;
};

inline constexpr std::size_t kDefaultNmaxLimit = 1500;
inline constexpr double kTruncationGap = 40.0;

/// log Z(N, n) = log sum_{d_1+...+d_N = n} prod_i w_{d_i+1} for 0 <= N, n <= N_max.
class ZTable {
 public:
  static ZTable build(const WeightSequence& ws, std::size_t n_max, const ZTableOptions& options = {});

  const WeightSequence& weights() const { return ws_; }
  std::size_t n_max() const { return n_max_; }
  bool truncated() const { return truncated_; }

  /// log Z(N, n); throws std::out_of_range outside the table.
  LogNonNeg log_z(std::size_t N, std::size_t n) const;
  /// Exact Z(N, n) when N, n are within the exact mirror.
  std::optional<Rational> exact_z(std::size_t N, std::size_t n) const;
  std::size_t exact_upto() const { return exact_upto_; }

  /// Row N as contiguous log values indexed by n.
  std::span<const double> row(std::size_t N) const;

  /// Binary container: "SGTZ", version byte, weight descriptor, row-major doubles.
  void save(std::ostream& out) const;
  static ZTable load(std::istream& in);

 private:
  ZTable(WeightSequence ws, std::size_t n_max) : ws_(std::move(ws)), n_max_(n_max) {}

  WeightSequence ws_;
  std::size_t n_max_;
  bool truncated_ = false;
  std::vector<double> log_entries_;  // (n_max+1)^2 row-major
  std::size_t exact_upto_ = 0;
  std::vector<std::vector<Rational>> exact_entries_;
};

inline constexpr std::uint8_t kZTableFormatVersion = 1;

/// Z_N = Z(N, N-1) / N.
LogNonNeg z_n(const ZTable& table, std::size_t N);
std::optional<Rational> exact_z_n(const ZTable& table, std::size_t N);

/// Partition function of ordered forests of m trees with N edges in total,
/// Z_N^{(m)} = (m/N) Z(N, N-m).
LogNonNeg forest_z(const ZTable& table, std::size_t N, std::size_t m);

struct RootDegreePmf {
  /// p[k] = P(sigma(s) = k+1) for 1 <= k <= N-1; p[0] = 0. Normalized.
  std::vector<double> p;
  /// Total mass of the closed-form values before normalization.
  double raw_mass = 0.0;
};

/// Law of the degree of s, the child of the root.
RootDegreePmf root_degree_pmf(const ZTable& table, std::size_t N);
/// Exact law (index k as above); requires the exact mirror to cover N.
std::vector<Rational> exact_root_degree_pmf(const ZTable& table, std::size_t N);

/// Joint law of (sigma(s), sigma(s_1)) where s_1 is the first child of s.
/// Entry [k][l] = P(sigma(s) = k+1, sigma(s_1) = l+1) for k >= 1, l >= 0.
std::vector<std::vector<double>> joint_s_s1_pmf(const ZTable& table, std::size_t N);
std::vector<std::vector<Rational>> exact_joint_s_s1_pmf(const ZTable& table, std::size_t N);

/// |sum_l l w_{l+1} Z(N-1, n-l) / ((n/N) Z(N, n)) - 1| in log mode.
double check_lemma_lsum(const ZTable& table, std::size_t N, std::size_t n);
/// lhs - rhs of the same identity in exact arithmetic.
Rational check_lemma_lsum_exact(const ZTable& table, std::size_t N, std::size_t n);

enum class L1Verdict { holds, violated, not_applicable };

struct L1Check {
  L1Verdict verdict = L1Verdict::not_applicable;
  /// Least index A with w_i / w_{i+1} < eps for every checked i >= A.
  std::size_t a_eps = 0;
  /// log C_eps with C_eps = sum_{i=0}^{A} w_{i+1}.
  double log_c_eps = 0.0;
};

/// Checks Z(N, n) <= eps Z(N, n+1) + C_eps^N. Ratios are checked up to the
/// table bound; throws std::runtime_error when no such A exists below it.
L1Check check_lemma_l1(const ZTable& table, double eps, std::size_t N, std::size_t n);

}  // namespace sgtree
