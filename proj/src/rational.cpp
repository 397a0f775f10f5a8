#include "lshape/rational.hpp"

#include <cctype>

#include "lshape/errors.hpp"

namespace lshape {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw DomainError("malformed rational '" + std::string(whole) + "'");
  }
  BigInt value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw DomainError("malformed rational '" + std::string(whole) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

BigInt pow10(long exponent) {
  BigInt p = 1;
  for (long i = 0; i < exponent; ++i) p *= 10;
  return p;
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (exp_text.size() > 4) throw DomainError("exponent out of range in '" + std::string(whole) + "'");
    exponent = static_cast<long>(parse_integer(exp_text, whole));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    digits = std::string(text.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    digits = std::string(text);
  }
  Rational value(parse_integer(digits, whole));
  if (exponent >= 0) {
    value *= pow10(exponent);
  } else {
    value /= pow10(-exponent);
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty rational");

  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, text);

  std::string_view num = text.substr(0, slash);
  bool negative = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    negative = num.front() == '-';
    num.remove_prefix(1);
  }
  const BigInt p = parse_integer(num, text);
  const BigInt q = parse_integer(text.substr(slash + 1), text);
  if (q == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  Rational value(p, q);
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational lcm(const Rational& x, const Rational& y) {
  if (x <= 0 || y <= 0) throw DomainError("lcm requires positive rationals");
  // In lowest terms, lcm(p1/q1, p2/q2) = lcm(p1, p2) / gcd(q1, q2).
  const BigInt num = boost::multiprecision::lcm(numerator(x), numerator(y));
  const BigInt den = boost::multiprecision::gcd(denominator(x), denominator(y));
  return Rational(num, den);
}

bool is_integer(const Rational& value) { return denominator(value) == 1; }

}  // namespace lshape
