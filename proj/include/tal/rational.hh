#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace tal {

using Rational = boost::rational<std::int64_t>;

std::int64_t floor_of(const Rational& x);
std::int64_t ceil_of(const Rational& x);
Rational frac_of(const Rational& x);
bool is_integral(const Rational& x);

// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& x);

// Accepts "p/q", integers and decimals such as "1.05". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

struct RationalHash {
  std::size_t operator()(const Rational& x) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(x.numerator());
    return h * 1000003u ^ std::hash<std::int64_t>{}(x.denominator());
  }
};

}  // namespace tal
