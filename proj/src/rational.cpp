#include "railnet/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace railnet {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

// Boost reads a leading 0 as an octal prefix, so strip it first.
BigInt decimal(std::string_view digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return BigInt(std::string(digits.substr(first)));
}

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    BigInt d = decimal(den);
    if (d == 0) bad(text);
    value = Rational(decimal(num), d);
  } else {
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = s.substr(0, e);
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) bad(text);
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long fraction_digits = 0;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      auto int_part = mantissa.substr(0, dot);
      auto frac_part = mantissa.substr(dot + 1);
      if (int_part.empty() && frac_part.empty()) bad(text);
      if (!int_part.empty() && !all_digits(int_part)) bad(text);
      if (!frac_part.empty() && !all_digits(frac_part)) bad(text);
      digits = std::string(int_part) + std::string(frac_part);
      fraction_digits = static_cast<long>(frac_part.size());
    } else {
      if (!all_digits(mantissa)) bad(text);
      digits = std::string(mantissa);
    }
    long scale = exponent - fraction_digits;
    BigInt n = decimal(digits);
    if (scale >= 0) {
      value = Rational(n * pow10(scale));
    } else {
      value = Rational(n, pow10(-scale));
    }
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  const auto& num = boost::multiprecision::numerator(value);
  const auto& den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::optional<std::string> exact_decimal(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  BigInt rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return std::nullopt;

  int places = std::max(twos, fives);
  BigInt scaled = num * pow10(places) / den;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, static_cast<std::size_t>(places - static_cast<int>(digits.size()) + 1), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return (negative ? "-" : "") + digits;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

BigInt lcm_of_denominators(const Rational* begin, const Rational* end) {
  BigInt result = 1;
  for (auto it = begin; it != end; ++it) {
    BigInt den = boost::multiprecision::denominator(*it);
    result = result / boost::multiprecision::gcd(result, den) * den;
  }
  return result;
}

}  // namespace railnet
