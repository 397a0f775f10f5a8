#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace lshape {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-3.5e-2") into an
/// exact rational. Throws DomainError on anything else, including q = 0.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Least common multiple of two positive rationals: the smallest positive
/// rational that is an integer multiple of both.
Rational lcm(const Rational& x, const Rational& y);

bool is_integer(const Rational& value);

}  // namespace lshape
