#include "tal/rational.hh"

#include <charconv>
#include <stdexcept>

namespace tal {

std::int64_t floor_of(const Rational& x) {
  std::int64_t q = x.numerator() / x.denominator();
  if (x.numerator() % x.denominator() != 0 && x.numerator() < 0) --q;
  return q;
}

std::int64_t ceil_of(const Rational& x) {
  std::int64_t f = floor_of(x);
  return Rational(f) == x ? f : f + 1;
}

Rational frac_of(const Rational& x) { return x - Rational(floor_of(x)); }

bool is_integral(const Rational& x) { return x.denominator() == 1; }

std::string to_string(const Rational& x) {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash), text), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15 || frac_part.front() == '-' || frac_part.front() == '+')
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    bool negative = !int_part.empty() && int_part.front() == '-';
    std::int64_t whole = int_part.empty() || int_part == "-" ? 0 : parse_int(int_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rational r(whole < 0 ? -whole : whole);
    r += Rational(parse_int(frac_part, text), scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

}  // namespace tal
