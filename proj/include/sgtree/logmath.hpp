#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace sgtree {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Natural log of a nonnegative quantity; -inf encodes exact zero.
class LogNonNeg {
 public:
  constexpr LogNonNeg() = default;
  constexpr explicit LogNonNeg(double log_value) : value_(log_value) {}

  static constexpr LogNonNeg zero() { return LogNonNeg(kNegInf); }
  static constexpr LogNonNeg one() { return LogNonNeg(0.0); }
  static LogNonNeg from_linear(double x) { return LogNonNeg(x > 0.0 ? std::log(x) : kNegInf); }

  constexpr double log() const { return value_; }
  double linear() const { return std::exp(value_); }
  constexpr bool is_zero() const { return value_ == kNegInf; }

  friend LogNonNeg operator*(LogNonNeg a, LogNonNeg b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogNonNeg(a.value_ + b.value_);
  }
  friend LogNonNeg operator/(LogNonNeg a, LogNonNeg b) {
    if (a.is_zero()) return zero();
    return LogNonNeg(a.value_ - b.value_);
  }
  friend LogNonNeg operator+(LogNonNeg a, LogNonNeg b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.value_, b.value_);
    const double lo = std::min(a.value_, b.value_);
    return LogNonNeg(hi + std::log1p(std::exp(lo - hi)));
  }
  LogNonNeg& operator+=(LogNonNeg other) { return *this = *this + other; }
  LogNonNeg& operator*=(LogNonNeg other) { return *this = *this * other; }

  friend constexpr bool operator==(LogNonNeg a, LogNonNeg b) { return a.value_ == b.value_; }
  friend constexpr auto operator<=>(LogNonNeg a, LogNonNeg b) { return a.value_ <=> b.value_; }

 private:
  double value_ = kNegInf;
};

// log(sum_i exp(x_i)), max-shifted. Empty input or all -inf gives -inf.
inline double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

// Relative discrepancy |a/b - 1| of two log-domain values. Two zeros agree.
inline double relative_gap(double log_a, double log_b) {
  if (log_a == kNegInf && log_b == kNegInf) return 0.0;
  if (log_a == kNegInf || log_b == kNegInf) return 1.0;
  return std::abs(std::expm1(log_a - log_b));
}

// log(n!) by cumulative summation of log j; bit-reproducible.
double log_factorial(std::size_t n);

}  // namespace sgtree
