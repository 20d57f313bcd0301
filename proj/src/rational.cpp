#include <nlqk/rational.hpp>

#include <nlqk/errors.hpp>

#include <cmath>
#include <limits>

namespace nlqk {

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("exact_rational: non-finite value");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);  // value = mantissa * 2^exponent
  // 53 bits of mantissa as an integer
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(scaled)};
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << (-exponent));
  }
  return r;
}

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

// cpp_int treats a leading zero as an octal prefix, so digits are cleaned first.
BigInt parse_integer(std::string text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidArgument("parse_rational: bad integer literal");
  }
  const auto first = text.find_first_not_of('0');
  text = first == std::string::npos ? "0" : text.substr(first);
  BigInt value(text.c_str());
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InvalidArgument("parse_rational: empty string");
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const BigInt num = parse_integer(text.substr(0, slash));
    const BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_integer(text));
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  BigInt den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::string digits = whole + frac;
  if (digits == "-" || digits == "+") digits += "0";
  return Rational(parse_integer(digits), den);
}

Rational factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial: negative argument");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

std::int64_t to_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw InvalidArgument("to_int64: value does not fit in 64 bits: " + value.str());
  }
  return value.convert_to<std::int64_t>();
}

}  // namespace nlqk
