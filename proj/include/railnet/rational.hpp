#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace railnet {

// All costs, penalties and objective values are exact rationals.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "7", "-3", "7/3", "0.125", "2.5e-2". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical text: "7", "-7/3".
std::string to_string(const Rational& value);

// Exact decimal rendering when the denominator has only factors 2 and 5.
std::optional<std::string> exact_decimal(const Rational& value);

double to_double(const Rational& value);

BigInt lcm_of_denominators(const Rational* begin, const Rational* end);

}  // namespace railnet
