#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace nlqk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational value of an IEEE double (every finite double is dyadic).
Rational exact_rational(double value);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "num/den", or "num" when the denominator is one.
std::string to_string(const Rational& r);

/// Parses "num", "num/den" or a decimal literal such as "0.05" (exactly 1/20).
Rational parse_rational(const std::string& text);

Rational factorial(int n);

/// Narrowing helper for JSON output; throws when the value does not fit.
std::int64_t to_int64(const BigInt& value);

}  // namespace nlqk
