#pragma once

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace sgtree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// ~50 significant decimal digits; used where weights are irrational.
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

// Parses "3", "-2.5", "1e-3", "7/4" into an exact rational.
Rational parse_rational(const std::string& text);

// Exact rational value of a finite double (every double is dyadic).
Rational rational_from_double(double x);

// Natural log of a positive rational, accurate to double rounding even when
// numerator and denominator exceed the double range.
double log_of(const Rational& q);

}  // namespace sgtree
