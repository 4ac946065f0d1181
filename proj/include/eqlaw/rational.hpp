#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eqlaw {

/// Exact rationals. Never floating point: outputs and scalar indices are
/// compared for equality.
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline bool is_zero(const Rational& q) { return q == 0; }

/// Accepts `7`, `-3/4` and decimal `2.5`.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) fail();
    for (std::size_t i = from; i < to; ++i)
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
    return boost::multiprecision::cpp_int(std::string(text.substr(from, to - from)));
  };
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = digits(slash + 1, text.size());
    if (den == 0) fail();
    value = Rational(digits(pos, slash), den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = digits(pos, dot);
    auto frac = digits(dot + 1, text.size());
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
    value = Rational(whole * scale + frac, scale);
  } else {
    value = Rational(digits(pos, text.size()));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace eqlaw
