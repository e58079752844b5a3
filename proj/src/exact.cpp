#include "sgtree/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace sgtree {

namespace {

BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

double log_of_positive(const BigInt& v) {
  const std::size_t bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 60) return std::log(static_cast<double>(v.convert_to<unsigned long long>()));
  const std::size_t shift = bits - 60;
  const BigInt top = v >> shift;
  return std::log(static_cast<double>(top.convert_to<unsigned long long>())) +
         static_cast<double>(shift) * std::log(2.0);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  BigInt mantissa = 0;
  long exponent = 0;
  bool any_digit = false;
  bool after_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (after_point) --exponent;
      any_digit = true;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("malformed rational '" + text + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw std::invalid_argument("malformed rational '" + text + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(text.substr(pos + 1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + text + "'");
    }
    if (pos + 1 + used != text.size()) throw std::invalid_argument("malformed rational '" + text + "'");
    exponent += e;
  }
  Rational value = exponent >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(exponent)))
                                 : Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-value) : value;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double frac = std::frexp(x, &exp);  // x = frac * 2^exp, |frac| in [0.5, 1)
  const auto mant = static_cast<long long>(std::ldexp(frac, 53));
  BigInt num = mant;
  exp -= 53;
  if (exp >= 0) return Rational(num << exp);
  return Rational(num, BigInt(1) << -exp);
}

double log_of(const Rational& q) {
  if (q <= 0) throw std::domain_error("log of nonpositive rational");
  return log_of_positive(boost::multiprecision::numerator(q)) -
         log_of_positive(boost::multiprecision::denominator(q));
}

}  // namespace sgtree
